import pytest
from scipy import constants as codata

from majorana.utilities import constants


@pytest.mark.parametrize(
    "value, name",
    [
        (constants.BOHR_MAGNETON, "Bohr magneton"),
        (constants.HBAR, "reduced Planck constant"),
        (constants.ATOMIC_MASS_UNIT, "atomic mass constant"),
        (constants.BOLTZMANN, "Boltzmann constant"),
    ],
)
def test_pinned_constants_match_codata(value, name):
    assert value == pytest.approx(codata.physical_constants[name][0], rel=1e-8)


def test_lab_unit_conversions():
    # 1 G = 1e-4 T
    assert constants.GAUSS == 1.0e-4
    assert constants.GAUSS_PER_CM == pytest.approx(1.0e-4 / codata.centi)
    assert constants.CENTIMETER == pytest.approx(codata.centi)


def test_constants_table_is_embedded_verbatim():
    table = constants.constants_table()
    assert table["hbar_J_s"] == constants.HBAR
    assert table["bohr_magneton_J_per_T"] == constants.BOHR_MAGNETON
    assert all(value > 0 for value in table.values())
