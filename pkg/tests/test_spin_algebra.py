from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from majorana.hub.spin_algebra import (
    SpinQuantum,
    angular_factor_half_integer,
    angular_factor_integer,
    lowering_coefficient,
    lowering_power_element,
    spin_matrices,
)
from majorana.utilities.errors import DomainError


def test_spin_quantum_properties():
    state = SpinQuantum(3, 1)
    assert state.f == Fraction(3, 2)
    assert state.fz == Fraction(1, 2)
    assert not state.is_integer
    assert state.dim == 4
    assert SpinQuantum(4, -2).is_integer


@pytest.mark.parametrize(
    "two_f, two_fz",
    [(4, 3), (2, 4), (0, 0), (26, 0), (-1, 1)],
)
def test_spin_quantum_rejects(two_f, two_fz):
    with pytest.raises(DomainError):
        SpinQuantum(two_f, two_fz)


@pytest.mark.parametrize("two_f", [1, 2, 3, 4, 7])
def test_spin_matrices_algebra(two_f):
    spin = spin_matrices(two_f)
    f = two_f / 2
    np.testing.assert_allclose(spin.x @ spin.y - spin.y @ spin.x, 1j * spin.z, atol=1e-12)
    casimir = spin.x @ spin.x + spin.y @ spin.y + spin.z @ spin.z
    np.testing.assert_allclose(casimir, f * (f + 1) * np.eye(two_f + 1), atol=1e-12)
    np.testing.assert_allclose(spin.plus, spin.minus.conj().T)
    # index 0 holds F_z = F
    assert spin.z[0, 0] == pytest.approx(f)


def test_lowering_coefficient():
    assert lowering_coefficient(2, 2) == pytest.approx(np.sqrt(2))
    assert lowering_coefficient(1, 1) == pytest.approx(1.0)
    assert lowering_coefficient(4, 0) == pytest.approx(np.sqrt(6))
    with pytest.raises(DomainError):
        lowering_coefficient(2, -2)
    with pytest.raises(DomainError):
        lowering_coefficient(2, 1)


def test_lowering_power_element_matches_angular_factor():
    assert lowering_power_element(SpinQuantum(4, 4), 0) ** 2 == pytest.approx(24.0)
    assert lowering_power_element(SpinQuantum(3, 3), -1) ** 2 == pytest.approx(12.0)
    with pytest.raises(DomainError):
        lowering_power_element(SpinQuantum(4, 4), 1)
    with pytest.raises(DomainError):
        lowering_power_element(SpinQuantum(4, 0), 2)


@pytest.mark.parametrize("two_f", [2, 4, 6, 8, 12])
def test_angular_factor_integer(two_f):
    f = two_f // 2
    for p in range(1, f + 1):
        expected = factorial(f + p) / factorial(f - p)
        assert angular_factor_integer(two_f, p) == expected
        dense = np.linalg.matrix_power(spin_matrices(two_f).minus, p)
        element = dense[f, f - p].real
        assert element**2 == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("two_f", [1, 3, 5, 11])
def test_angular_factor_half_integer(two_f):
    top = (two_f + 1) // 2
    for p in range(1, top + 1):
        expected = top * factorial(top + p - 1) / factorial(top - p)
        assert angular_factor_half_integer(two_f, p) == pytest.approx(expected, rel=1e-15)
        assert lowering_power_element(SpinQuantum(two_f, 2 * p - 1), -1) ** 2 == pytest.approx(
            expected, rel=1e-10
        )


def test_angular_factor_domain():
    assert angular_factor_half_integer(1, 1) == 1.0
    with pytest.raises(DomainError):
        angular_factor_integer(3, 1)
    with pytest.raises(DomainError):
        angular_factor_integer(2, 2)
    with pytest.raises(DomainError):
        angular_factor_half_integer(2, 1)
    with pytest.raises(DomainError):
        angular_factor_half_integer(3, 3)
