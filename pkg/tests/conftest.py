# tests/conftest.py

from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from majorana.hub.spin_algebra import SpinQuantum
from majorana.hub.trap_model import TrapConfig, config_for_chi0
from majorana.utilities.settings import Settings

TRAPS_DIR: Path = Path(__file__).resolve().parent.parent / "traps"

RB87_TRAP: str = """\
# 87Rb F = 1
bias_field_gauss = 1.0
radial_gradient_gauss_per_cm = 50000   # G/cm
g_factor = 0.5
mass_amu = 87
two_f = 2
two_fz = 2
"""


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def rb87() -> TrapConfig:
    return TrapConfig(
        bias_field=1.0,
        radial_gradient=1.0e5,
        g_factor=0.5,
        mass_amu=87.0,
        spin=SpinQuantum(2, 2),
    )


@pytest.fixture
def trap_at_chi0() -> Callable[[float, int, int], TrapConfig]:
    """Factory for 87Rb-like traps tuned to a given chi0 and spin."""

    def build(chi0: float, two_f: int, two_fz: int) -> TrapConfig:
        return config_for_chi0(chi0, SpinQuantum(two_f, two_fz))

    return build


@pytest.fixture
def trap_file(tmp_path: Path) -> Callable[[str], str]:
    def write(text: str = RB87_TRAP) -> str:
        destination = tmp_path / "trap.trap"
        destination.write_text(text, encoding="utf-8")
        return str(destination)

    return write
