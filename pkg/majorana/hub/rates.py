# majorana/hub/rates.py

from dataclasses import dataclass, field
from fractions import Fraction
from math import atan, exp, inf, isfinite, log, pi, sqrt
from typing import Callable, List, Optional, Tuple

from loguru import logger
from scipy.integrate import quad

from majorana.hub.perturbation import c_factor
from majorana.hub.spin_algebra import angular_factor_half_integer, angular_factor_integer
from majorana.hub.trap_model import (
    DerivedParams,
    SurfaceParams,
    TrapConfig,
    derive_params,
    final_wavenumber,
    surface_params,
)
from majorana.utilities.constants import BOLTZMANN, HBAR
from majorana.utilities.errors import DispatchError, DomainError, ValidationError

MomentumDensity = Callable[[float], float]

NORMALIZATION_TOLERANCE: float = 1.0e-6
MAX_LOG_WEIGHT: float = 700.0

NOTE_HALF_INTEGER_C_P: str = (
    "C_p evaluated at the physical F_zi = p - 1/2, not at F_zi = p as tabulated"
)
NOTE_HALF_INTEGER_CHI_POWER: str = (
    "chi power uses (p chi0^2/8)^(p-1); the amplitude form (F_zi chi0^2/8)^(p-1) "
    "differs for half-integer spin"
)
NOTE_C_BAR: str = (
    "momentum-distribution rate uses the ground-state C_p in place of the undetermined C-bar_p"
)


@dataclass(frozen=True)
class RateBreakdown:
    """Every factor of an escape rate.

    rate = prefactor * chi_power * angular * c_p_squared * density_weight * exp(-exponent)
    """

    p: int
    prefactor: float  # rad/s, pi omega_i / 2
    chi_power: float
    angular: float
    c_p: Fraction
    c_p_squared: float
    c_exponent_factor: float
    exponent: float
    rate: float  # 1/s
    log_rate: float
    omega_i: float
    chi0: float
    density_weight: float = 1.0
    adiabaticity_warning: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)


def _assemble(
    p: int,
    derived: DerivedParams,
    surface: SurfaceParams,
    angular: float,
    c_p: Fraction,
    c: float,
    exponent: float,
    density_weight: float = 1.0,
    notes: Tuple[str, ...] = (),
    log_density_weight: Optional[float] = None,
) -> RateBreakdown:
    prefactor = pi * surface.omega_i / 2
    chi_power = (p * derived.chi0**2 / 8) ** (p - 1)
    c_p_squared = float(c_p) ** 2
    if log_density_weight is None and density_weight > 0:
        log_density_weight = log(density_weight)
    if log_density_weight is not None and isfinite(exponent):
        log_rate = (
            log(prefactor)
            + (p - 1) * log(p * derived.chi0**2 / 8)
            + log(angular)
            + log(c_p_squared)
            + log_density_weight
            - exponent
        )
        rate = exp(log_rate)
    else:
        log_rate = -inf
        rate = 0.0
    return RateBreakdown(
        p=p,
        prefactor=prefactor,
        chi_power=chi_power,
        angular=angular,
        c_p=c_p,
        c_p_squared=c_p_squared,
        c_exponent_factor=c,
        exponent=exponent,
        rate=rate,
        log_rate=log_rate,
        omega_i=surface.omega_i,
        chi0=derived.chi0,
        density_weight=density_weight,
        adiabaticity_warning=derived.adiabaticity_warning,
        notes=notes,
    )


def c_semiclassical(fz_i: Fraction) -> float:
    """
    Exponent correction c = sqrt(2 F_zi) arctan(1 / sqrt(2 F_zi)).

    Args:
        fz_i: initial projection, positive

    Returns:
        float: c in (0, 1), pi/4 at F_zi = 1/2
    """
    if fz_i <= 0:
        raise DomainError(f"F_zi = {fz_i} must be positive")
    root = sqrt(2 * float(fz_i))
    return root * atan(1 / root)


def escape_rate_integer(cfg: TrapConfig) -> RateBreakdown:
    """
    Escape rate of an integer spin to the F_z = 0 continuum.

    Args:
        cfg: trap configuration, integer F

    Returns:
        RateBreakdown: c = 1 and exponent k_f^2 b_i^2
    """
    if not cfg.spin.is_integer:
        raise DispatchError("half-integer spin: use escape_rate_half_integer")
    derived = derive_params(cfg)
    surface = surface_params(derived, cfg.spin.two_fz)
    p = cfg.spin.two_fz // 2
    k_f = final_wavenumber(derived, surface)
    return _assemble(
        p=p,
        derived=derived,
        surface=surface,
        angular=angular_factor_integer(cfg.spin.two_f, p),
        c_p=c_factor(p, cfg.spin.fz),
        c=1.0,
        exponent=(k_f * surface.b_i) ** 2,
    )


def escape_rate_half_integer(cfg: TrapConfig) -> RateBreakdown:
    """
    Escape rate of a half-integer spin to the F_z = -1/2 surface.

    Args:
        cfg: trap configuration, half-integer F

    Returns:
        RateBreakdown: p = F_zi + 1/2 and exponent c k_f^2 b_i^2
    """
    if cfg.spin.is_integer:
        raise DispatchError("integer spin: use escape_rate_integer")
    derived = derive_params(cfg)
    surface = surface_params(derived, cfg.spin.two_fz)
    p = (cfg.spin.two_fz + 1) // 2
    k_f = final_wavenumber(derived, surface)
    c = c_semiclassical(cfg.spin.fz)
    return _assemble(
        p=p,
        derived=derived,
        surface=surface,
        angular=angular_factor_half_integer(cfg.spin.two_f, p),
        c_p=c_factor(p, cfg.spin.fz),
        c=c,
        exponent=c * (k_f * surface.b_i) ** 2,
        notes=(NOTE_HALF_INTEGER_C_P, NOTE_HALF_INTEGER_CHI_POWER),
    )


def escape_rate(cfg: TrapConfig) -> RateBreakdown:
    """Pick the integer or half-integer formula from the spin parity."""
    if cfg.spin.is_integer:
        return escape_rate_integer(cfg)
    return escape_rate_half_integer(cfg)


def ground_state_density(surface: SurfaceParams) -> MomentumDensity:
    """Momentum density (b_i^2/pi) exp(-k^2 b_i^2) of the oscillator ground state."""
    width = surface.b_i**2

    def density(k: float) -> float:
        return width / pi * exp(-(k**2) * width)

    return density


def thermal_width(cfg: TrapConfig, temperature: float) -> float:
    """a = hbar^2 / (2 m k_B T) in m^2."""
    if temperature <= 0:
        raise DomainError(f"temperature must be positive, got {temperature}")
    return HBAR**2 / (2 * cfg.mass_kg * BOLTZMANN * temperature)


def thermal_density(cfg: TrapConfig, temperature: float) -> MomentumDensity:
    """Boltzmann momentum density (a/pi) exp(-a k^2) at temperature T in K."""
    width = thermal_width(cfg, temperature)

    def density(k: float) -> float:
        return width / pi * exp(-width * k**2)

    return density


def _check_normalized(density: MomentumDensity, length: float) -> float:
    # integrate 2 pi k P(k) dk in u = k * length
    def integrand(u: float) -> float:
        return 2 * pi * u * density(u / length) / length**2

    norm, _ = quad(integrand, 0, inf, limit=200)
    if abs(norm - 1) > NORMALIZATION_TOLERANCE:
        raise ValidationError(f"momentum density integrates to {norm:.9g}, not 1")
    return norm


def escape_rate_momentum(
    cfg: TrapConfig,
    momentum_density: MomentumDensity,
    length_scale: Optional[float] = None,
    notes: Tuple[str, ...] = (),
) -> RateBreakdown:
    """
    Escape rate for a general isotropic momentum distribution P(|k|).

    The Gaussian factor of the ground-state rate becomes (pi / b_i^2) P(k_f).
    The breakdown keeps the ground-state exponent (k_f b_i)^2 and carries the
    ratio of that factor to exp(-exponent) in density_weight, which is 1 for
    the ground-state density and exceeds 1 when P is concentrated near k_f.

    Args:
        cfg: trap configuration, integer or half-integer F
        momentum_density: P(k) in m^2, normalized over the plane
        length_scale: typical width of P in m, b_i when omitted
        notes: extra metadata carried into the breakdown

    Returns:
        RateBreakdown: exponent (k_f b_i)^2, zero rate where P(k_f) = 0
    """
    derived = derive_params(cfg)
    surface = surface_params(derived, cfg.spin.two_fz)
    _check_normalized(momentum_density, length_scale or surface.b_i)

    if cfg.spin.is_integer:
        p = cfg.spin.two_fz // 2
        angular = angular_factor_integer(cfg.spin.two_f, p)
    else:
        p = (cfg.spin.two_fz + 1) // 2
        angular = angular_factor_half_integer(cfg.spin.two_f, p)

    k_f = final_wavenumber(derived, surface)
    exponent = (k_f * surface.b_i) ** 2
    density = momentum_density(k_f)
    log_weight = log(pi / surface.b_i**2) + log(density) + exponent if density > 0 else None
    weight = 0.0 if log_weight is None else exp(min(log_weight, MAX_LOG_WEIGHT))
    logger.warning(NOTE_C_BAR)
    return _assemble(
        p=p,
        derived=derived,
        surface=surface,
        angular=angular,
        c_p=c_factor(p, cfg.spin.fz),
        c=1.0,
        exponent=exponent,
        density_weight=weight,
        notes=(NOTE_C_BAR,) + tuple(notes),
        log_density_weight=log_weight,
    )


def escape_rate_thermal(cfg: TrapConfig, temperature: float) -> RateBreakdown:
    """
    Momentum-form rate with the Boltzmann density at temperature T.

    The breakdown keeps the Gaussian exponent a k_f^2 exactly and moves the
    normalization a / b_i^2 into density_weight.

    Args:
        cfg: trap configuration
        temperature: in K

    Returns:
        RateBreakdown: exponent hbar^2 k_f^2 / (2 m k_B T)
    """
    width = thermal_width(cfg, temperature)
    derived = derive_params(cfg)
    surface = surface_params(derived, cfg.spin.two_fz)
    reference = escape_rate_momentum(
        cfg,
        thermal_density(cfg, temperature),
        length_scale=sqrt(width),
        notes=(f"thermal momentum distribution at T = {temperature:.6g} K",),
    )
    k_f = final_wavenumber(derived, surface)
    return _assemble(
        p=reference.p,
        derived=derived,
        surface=surface,
        angular=reference.angular,
        c_p=reference.c_p,
        c=1.0,
        exponent=width * k_f**2,
        density_weight=width / surface.b_i**2,
        notes=reference.notes,
    )


def rates_along(configs: List[TrapConfig]) -> List[RateBreakdown]:
    """Rates for a list of configs, in input order."""
    return [escape_rate(cfg) for cfg in configs]
