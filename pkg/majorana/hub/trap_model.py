# majorana/hub/trap_model.py

from dataclasses import dataclass, field, replace
from enum import Enum
from math import sqrt
from typing import Dict, NamedTuple, Sequence

import numpy as np
from loguru import logger

from majorana.hub.spin_algebra import SpinQuantum
from majorana.utilities.constants import (
    ATOMIC_MASS_UNIT,
    BOHR_MAGNETON,
    CENTIMETER,
    GAUSS,
    GAUSS_PER_CM,
    HBAR,
)
from majorana.utilities.errors import DomainError, SingularFrameError

# Above this the adiabatic rate formulas stop being trustworthy
CHI0_WARNING_THRESHOLD: float = 0.1

SWEEPABLE_PARAMETERS: Sequence[str] = ("bias_field", "radial_gradient", "g_factor")


class PotentialMode(Enum):
    EXACT = "exact"
    HARMONIC = "harmonic"


class AdiabaticPotential(NamedTuple):
    energy: float  # J
    trapped: bool


@dataclass(frozen=True)
class TrapConfig:
    """Field configuration in lab units plus the trapped spin state.

    Args:
        bias_field: B0 in Gauss
        radial_gradient: lambda in Gauss/cm
        g_factor: Lande g factor of the hyperfine level
        mass_amu: atomic mass number
        spin: trapped state, 2F_z > 0
        axial_curvature: B_z'' in Gauss/cm^2, carried but unused
    """

    bias_field: float
    radial_gradient: float
    g_factor: float
    mass_amu: float
    spin: SpinQuantum
    axial_curvature: float = 0.0

    def __post_init__(self):
        if not self.bias_field > 0:
            raise SingularFrameError(
                f"bias_field must be positive (singular adiabatic frame), got {self.bias_field}"
            )
        for name in ("radial_gradient", "g_factor", "mass_amu"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.axial_curvature < 0:
            raise DomainError(f"axial_curvature must be non-negative, got {self.axial_curvature}")
        if self.spin.two_fz <= 0:
            raise DomainError(f"2F_z = {self.spin.two_fz} is not a trapped state")

    @property
    def bias_field_si(self) -> float:
        return self.bias_field * GAUSS

    @property
    def radial_gradient_si(self) -> float:
        return self.radial_gradient * GAUSS_PER_CM

    @property
    def mass_kg(self) -> float:
        return self.mass_amu * ATOMIC_MASS_UNIT


@dataclass(frozen=True)
class DerivedParams:
    """SI trap scales derived from a TrapConfig."""

    omega0: float  # rad/s
    b0: float  # m
    chi0: float
    E0: float  # J
    omega_prec: float  # rad/s
    mass_kg: float
    adiabaticity_warning: bool = field(default=False)


@dataclass(frozen=True)
class SurfaceParams:
    """Oscillator scales on the adiabatic surface with projection F_z."""

    two_fz: int
    omega_i: float  # rad/s
    b_i: float  # m
    E_i: float  # J


def field_vector(cfg: TrapConfig, r: Sequence[float]) -> np.ndarray:
    """
    Field (lambda x, -lambda y, B0) in Gauss at a position given in meters.

    Args:
        cfg: trap configuration
        r: (x, y, z) in m

    Returns:
        np.ndarray: field vector in Gauss
    """
    x, y = r[0] / CENTIMETER, r[1] / CENTIMETER
    return np.array(
        [cfg.radial_gradient * x, -cfg.radial_gradient * y, cfg.bias_field]
    )


def field_magnitude(cfg: TrapConfig, r: Sequence[float]) -> float:
    """|B| in Gauss; independent of z."""
    rho_cm = np.hypot(r[0], r[1]) / CENTIMETER
    return float(np.hypot(cfg.bias_field, cfg.radial_gradient * rho_cm))


def field_direction(cfg: TrapConfig, r: Sequence[float]) -> np.ndarray:
    b = field_vector(cfg, r)
    return b / np.linalg.norm(b)


def adiabatic_potential(
    cfg: TrapConfig,
    two_fz: int,
    r: Sequence[float],
    mode: PotentialMode = PotentialMode.EXACT,
) -> AdiabaticPotential:
    """
    Potential mu0 g F_z B(r) felt on one adiabatic surface.

    Surfaces with F_z <= 0 are returned as well but flagged untrapped.

    Args:
        cfg: trap configuration
        two_fz: 2F_z of the surface
        r: position in m
        mode: exact field magnitude or its harmonic expansion

    Returns:
        AdiabaticPotential: energy in J and the trapped flag
    """
    if abs(two_fz) > cfg.spin.two_f:
        raise DomainError(f"|2F_z| = {abs(two_fz)} exceeds 2F = {cfg.spin.two_f}")

    if mode is PotentialMode.HARMONIC:
        rho = np.hypot(r[0], r[1])
        b0 = cfg.bias_field_si
        magnitude = b0 + (cfg.radial_gradient_si * rho) ** 2 / (2 * b0)
    else:
        magnitude = field_magnitude(cfg, r) * GAUSS

    energy = BOHR_MAGNETON * cfg.g_factor * (two_fz / 2) * magnitude
    return AdiabaticPotential(energy=float(energy), trapped=two_fz > 0)


def derive_params(cfg: TrapConfig) -> DerivedParams:
    """
    Trap frequency, oscillator length and adiabaticity in SI units.

    Args:
        cfg: trap configuration

    Returns:
        DerivedParams: omega0, b0, chi0, E0, omega_prec
    """
    mass = cfg.mass_kg
    mu = BOHR_MAGNETON * cfg.g_factor
    b_bias = cfg.bias_field_si
    gradient = cfg.radial_gradient_si

    omega0 = sqrt(mu * gradient**2 / (mass * b_bias))
    b0 = sqrt(HBAR / (mass * omega0))
    E0 = mu * b_bias
    omega_prec = E0 / HBAR
    chi0 = omega0 / omega_prec

    warning = chi0 >= CHI0_WARNING_THRESHOLD
    if warning:
        logger.warning(
            f"chi0 = {chi0:.3g} is not small; adiabatic escape rates are unreliable"
        )
    return DerivedParams(
        omega0=omega0,
        b0=b0,
        chi0=chi0,
        E0=E0,
        omega_prec=omega_prec,
        mass_kg=mass,
        adiabaticity_warning=warning,
    )


def surface_params(derived: DerivedParams, two_fz: int) -> SurfaceParams:
    """
    Oscillator frequency, length and energy on a trapped surface.

    Args:
        derived: trap scales
        two_fz: 2F_z > 0

    Returns:
        SurfaceParams: omega_i = omega0 sqrt(F_z), b_i = b0 / F_z^(1/4)
    """
    if two_fz <= 0:
        raise DomainError(f"2F_z = {two_fz} has no bound oscillator state")
    fz = two_fz / 2
    omega_i = derived.omega0 * sqrt(fz)
    b_i = derived.b0 / fz**0.25
    E_i = fz * derived.E0 + HBAR * omega_i
    return SurfaceParams(two_fz=two_fz, omega_i=omega_i, b_i=b_i, E_i=E_i)


def final_wavenumber(derived: DerivedParams, surface: SurfaceParams) -> float:
    """
    Wavenumber of the escaping atom, k_f = sqrt(2 m F_z E0) / hbar.

    The oscillator zero point is dropped from the initial energy, so that
    k_f^2 b_i^2 = 2 sqrt(F_z) / chi0.

    Args:
        derived: trap scales
        surface: initial surface

    Returns:
        float: k_f in 1/m
    """
    if surface.two_fz <= 0:
        raise DomainError("the initial surface must be trapped")
    energy = (surface.two_fz / 2) * derived.E0
    return sqrt(2 * derived.mass_kg * energy) / HBAR


def level_energy(derived: DerivedParams, two_fz: int, n: int, angular: int) -> float:
    """
    Harmonic level mu0 g B0 F_z + sqrt(F_z) hbar omega0 (2n + |L| + 1).

    Args:
        derived: trap scales
        two_fz: 2F_z > 0
        n: radial node count
        angular: orbital angular momentum L

    Returns:
        float: energy in J
    """
    if n < 0:
        raise DomainError(f"radial quantum number must be non-negative, got {n}")
    surface = surface_params(derived, two_fz)
    return (two_fz / 2) * derived.E0 + HBAR * surface.omega_i * (2 * n + abs(angular) + 1)


def radial_gradient_for_chi0(
    chi0: float, bias_field: float, g_factor: float, mass_amu: float
) -> float:
    """
    Gradient in G/cm that gives the requested chi0.

    Inverts chi0^2 = hbar^2 lambda^2 / (m mu0 g B0^3).

    Args:
        chi0: target adiabaticity
        bias_field: B0 in Gauss
        g_factor: Lande g factor
        mass_amu: atomic mass number

    Returns:
        float: lambda in G/cm
    """
    if chi0 <= 0:
        raise DomainError(f"chi0 must be positive, got {chi0}")
    mass = mass_amu * ATOMIC_MASS_UNIT
    b_bias = bias_field * GAUSS
    gradient = chi0 * sqrt(mass * BOHR_MAGNETON * g_factor * b_bias**3) / HBAR
    return gradient / GAUSS_PER_CM


def config_for_chi0(
    chi0: float,
    spin: SpinQuantum,
    bias_field: float = 1.0,
    g_factor: float = 0.5,
    mass_amu: float = 87.0,
) -> TrapConfig:
    """Trap with the given chi0, keeping B0, g and A fixed."""
    gradient = radial_gradient_for_chi0(chi0, bias_field, g_factor, mass_amu)
    return TrapConfig(
        bias_field=bias_field,
        radial_gradient=gradient,
        g_factor=g_factor,
        mass_amu=mass_amu,
        spin=spin,
    )


def with_parameter(cfg: TrapConfig, name: str, value: float) -> TrapConfig:
    """
    Copy of a config with one sweepable field replaced.

    Args:
        cfg: base configuration
        name: one of bias_field, radial_gradient, g_factor
        value: new value, validated like the original

    Returns:
        TrapConfig: updated configuration
    """
    if name not in SWEEPABLE_PARAMETERS:
        raise DomainError(f"{name} cannot be swept; choose from {', '.join(SWEEPABLE_PARAMETERS)}")
    return replace(cfg, **{name: value})


def unit_prefactors() -> Dict[str, float]:
    """
    Lab-unit coefficients implied by the pinned constants.

    Returns:
        Dict[str, float]: omega_prec per (g B0 in G), and omega0 per
        (lambda in G/cm times sqrt(g / (A B0 in G)))
    """
    precession = BOHR_MAGNETON * GAUSS / HBAR
    trap = GAUSS_PER_CM * sqrt(BOHR_MAGNETON / (ATOMIC_MASS_UNIT * GAUSS))
    return {"precession_per_gauss": precession, "trap_per_gradient": trap}
