# majorana/utilities/oracles.py
#
# Brute-force counterparts of the closed forms in majorana.hub. Each oracle
# reaches its answer by a different road (matrix products, finite
# differences, quadrature, explicit sums) so the two can be compared.

from dataclasses import dataclass, field
from math import factorial, log, pi, sqrt
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson
from scipy.special import eval_genlaguerre, logsumexp

from majorana.hub.adiabatic_frame import coupling_strengths, rotation_matrix
from majorana.hub.perturbation import log_amplitude_integer
from majorana.hub.spin_algebra import SpinQuantum, spin_matrices
from majorana.hub.trap_model import (
    DerivedParams,
    TrapConfig,
    config_for_chi0,
    derive_params,
    final_wavenumber,
    level_energy,
    surface_params,
)
from majorana.utilities.constants import HBAR
from majorana.utilities.errors import DomainError, OracleFailure

MIN_RADIAL_CUTOFF: float = 8.0
MIN_GRID_POINTS: int = 256
CUTOFF_CHECK_FACTOR: float = 1.5

# second-order sum at F = F_zi = 2
SECOND_ORDER_TWO_F: int = 4
SECOND_ORDER_MAX_CHI0: float = 1.0e-2
INTERMEDIATE_TWO_FZ: int = 2
INTERMEDIATE_L: int = -1
TAIL_FRACTION: float = 0.1
TAIL_TOLERANCE: float = 1.0e-4
RESONANCE_TOLERANCE: float = 1.0e-9
OVERLAP_CHECK_STATES: int = 6
OVERLAP_GRID_POINTS: int = 4096
OVERLAP_GRID_EXTENT: float = 12.0
OVERLAP_CHECK_TOLERANCE: float = 1.0e-8


@dataclass(frozen=True)
class QuadratureSpec:
    """Disk quadrature settings; the cutoff is in units of b_i."""

    radial_cutoff: float = MIN_RADIAL_CUTOFF
    grid_points: int = MIN_GRID_POINTS
    tolerance: float = 1.0e-8

    def __post_init__(self):
        if self.radial_cutoff < MIN_RADIAL_CUTOFF:
            raise DomainError(f"radial_cutoff must be at least {MIN_RADIAL_CUTOFF}")
        if self.grid_points < MIN_GRID_POINTS:
            raise DomainError(f"grid_points must be at least {MIN_GRID_POINTS}")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")


@dataclass(frozen=True)
class SecondOrderResult:
    log_amplitude: float
    closure_log_amplitude: float
    ratio: float
    deviation: float
    n_terms: int
    chi0: float
    trace: Tuple[float, ...] = field(default_factory=tuple)


class LogValues(NamedTuple):
    log_abs: np.ndarray
    sign: np.ndarray


def dense_power_element(two_f: int, two_fz_i: int, two_fz_f: int) -> float:
    """
    Entry (F_zf, F_zi) of the explicitly multiplied matrix F_-^p.

    Args:
        two_f: 2F
        two_fz_i: 2F_zi
        two_fz_f: 2F_zf

    Returns:
        float: real matrix element
    """
    if (two_fz_i - two_fz_f) % 2 or two_fz_f >= two_fz_i:
        raise DomainError(f"no integer lowering from 2F_z = {two_fz_i} to {two_fz_f}")
    if abs(two_fz_i) > two_f or two_fz_f < -two_f or (two_f - two_fz_i) % 2:
        raise DomainError(f"projections outside the multiplet 2F = {two_f}")
    steps = (two_fz_i - two_fz_f) // 2
    power = np.linalg.matrix_power(spin_matrices(two_f).minus, steps)
    row = (two_f - two_fz_f) // 2
    column = (two_f - two_fz_i) // 2
    return float(power[row, column].real)


def gauge_potential_fd(
    cfg: TrapConfig, two_f: int, r: Sequence[float], h: Optional[float] = None
) -> List[np.ndarray]:
    """
    -i hbar U^dagger dU/dx_j by central differences of the rotation.

    Args:
        cfg: trap configuration
        two_f: 2F
        r: position in m
        h: step in m, 1e-6 max(b0, |r|) by default

    Returns:
        List[np.ndarray]: x, y and z components
    """
    r = np.asarray(r, dtype=float)
    if h is None:
        h = 1.0e-6 * max(derive_params(cfg).b0, float(np.linalg.norm(r)))
    if h <= 0:
        raise DomainError(f"step must be positive, got {h}")

    u_dagger = rotation_matrix(cfg, two_f, r).conj().T
    components = []
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        forward = rotation_matrix(cfg, two_f, r + step)
        backward = rotation_matrix(cfg, two_f, r - step)
        derivative = (forward - backward) / (2 * h)
        components.append(-1j * HBAR * u_dagger @ derivative)
    return components


def _polar_overlap(b_i: float, k_f: float, box_side: float, cutoff: float, points: int) -> float:
    nodes, weights = leggauss(points)
    radius = cutoff * b_i
    r = radius / 2 * (nodes + 1)
    r_weights = radius / 2 * weights
    phi = 2 * pi * np.arange(points) / points
    phi_weight = 2 * pi / points

    ground = np.exp(-(r**2) / (2 * b_i**2)) / (b_i * sqrt(pi))
    phase = np.exp(-1j * k_f * np.outer(r, np.cos(phi)))
    integrand = phase * (ground * r * r_weights)[:, None]
    return float(abs(integrand.sum() * phi_weight / box_side))


def numeric_overlap(
    b_i: float, k_f: float, box_side: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """
    Plane-wave overlap of the Gaussian ground state by disk quadrature.

    Gauss-Legendre in r and the uniform rule in phi; the result is checked
    against a disk CUTOFF_CHECK_FACTOR times larger.

    Args:
        b_i: oscillator length in m
        k_f: wavenumber in 1/m
        box_side: box side L in m
        spec: quadrature settings

    Returns:
        float: |<k_f|0>|
    """
    spec = spec or QuadratureSpec()
    value = _polar_overlap(b_i, k_f, box_side, spec.radial_cutoff, spec.grid_points)
    wider = _polar_overlap(
        b_i, k_f, box_side, spec.radial_cutoff * CUTOFF_CHECK_FACTOR, spec.grid_points
    )
    change = abs(wider - value) / max(abs(wider), np.finfo(float).tiny)
    if change > spec.tolerance:
        raise OracleFailure(
            f"overlap moved by {change:.3g} when the cutoff grew", trace=[value, wider]
        )
    return value


def width_mismatch_overlap(n: int, kappa: float) -> float:
    """
    <n, L=-1; b_1|x_- psi_0; b_i> normalized, kappa = b_1^2 / b_i^2.

    Equals 4 kappa / (1 + kappa)^2 sqrt(n + 1) t^n with t = (kappa - 1)/(kappa + 1).
    """
    t = (kappa - 1) / (kappa + 1)
    return 4 * kappa / (1 + kappa) ** 2 * sqrt(n + 1) * t**n


def _radial_state(n: int, b: float, r: np.ndarray) -> np.ndarray:
    # |L| = 1 oscillator state, angular factor dropped
    norm = sqrt(factorial(n) / (pi * factorial(n + 1))) / b
    x = (r / b) ** 2
    return norm * (r / b) * eval_genlaguerre(n, 1, x) * np.exp(-x / 2)


def radial_overlap_quadrature(
    n: int,
    b_final: float,
    b_initial: float,
    points: int = OVERLAP_GRID_POINTS,
    extent: float = OVERLAP_GRID_EXTENT,
) -> float:
    """
    Same overlap as width_mismatch_overlap, integrated on a radial grid.

    Args:
        n: radial quantum number on the b_final surface
        b_final: oscillator length of the intermediate surface
        b_initial: oscillator length of the initial state
        points: grid size
        extent: grid end in units of the larger length

    Returns:
        float: overlap
    """
    r = np.linspace(0.0, extent * max(b_final, b_initial), points)
    integrand = 2 * pi * r * _radial_state(n, b_final, r) * _radial_state(0, b_initial, r)
    return float(simpson(integrand, x=r))


def log_laguerre(n_max: int, alpha: float, x: float) -> LogValues:
    """
    log|L_n^alpha(x)| and sign for n = 0..n_max.

    Forward three-term recurrence with a running log scale so that values far
    outside double range stay representable.
    """
    log_abs = np.empty(n_max + 1)
    sign = np.empty(n_max + 1)
    log_abs[0], sign[0] = 0.0, 1.0

    previous, current, scale = 1.0, 1.0 + alpha - x, 0.0
    if n_max >= 1:
        log_abs[1] = log(abs(current)) if current else -np.inf
        sign[1] = np.sign(current)
    for n in range(1, n_max):
        following = ((2 * n + alpha + 1 - x) * current - (n + alpha) * previous) / (n + 1)
        previous, current = current, following
        magnitude = abs(current)
        if magnitude > 1e150 or 0 < magnitude < 1e-150:
            previous /= magnitude
            current /= magnitude
            scale += log(magnitude)
        log_abs[n + 1] = (log(abs(current)) + scale) if current else -np.inf
        sign[n + 1] = np.sign(current)
    return LogValues(log_abs=log_abs, sign=sign)


def default_term_count(x: float, t: float) -> int:
    """Mean plus twelve spreads of the intermediate-state weights, plus margin."""
    if t == 0:
        return 0
    mean = x * t / (1 + t) ** 2
    spread = sqrt(x * t * (1 - t) / (1 + t) ** 3)
    return int(mean + 12 * spread) + 40


def second_order_sum(
    derived: DerivedParams,
    n_max: Optional[int] = None,
    box_side: float = 1.0e-2,
    closure_denominators: bool = False,
    match_widths: bool = False,
) -> SecondOrderResult:
    """
    Two single-step spin flips for F = F_zi = 2, summed over intermediate states.

    Intermediate states are the L = -1 oscillator levels of the F_z = 1 surface
    with energies from level_energy. Orbital overlaps come from the analytic
    width-mismatch formula, checked against radial quadrature for the lowest
    levels; projections onto the final plane wave use the momentum-space
    oscillator functions. The result is compared with the closure amplitude
    restricted to single steps.

    Args:
        derived: trap scales with chi0 <= 1e-2
        n_max: highest radial quantum number, estimated when omitted
        box_side: box side L in m
        closure_denominators: replace every energy denominator by -E0
        match_widths: give the intermediate surface the initial oscillator length

    Returns:
        SecondOrderResult: log amplitudes, their ratio and the partial-sum trace
    """
    if derived.chi0 > SECOND_ORDER_MAX_CHI0 * (1 + 1e-9):
        raise DomainError(f"chi0 = {derived.chi0:.3g} is above {SECOND_ORDER_MAX_CHI0}")

    spin = SpinQuantum(SECOND_ORDER_TWO_F, SECOND_ORDER_TWO_F)
    initial = surface_params(derived, spin.two_fz)
    middle = surface_params(derived, INTERMEDIATE_TWO_FZ)
    b_i = initial.b_i
    b_mid = b_i if match_widths else middle.b_i
    k_f = final_wavenumber(derived, initial)

    kappa = b_mid**2 / b_i**2
    t = (kappa - 1) / (kappa + 1)
    x = (k_f * b_mid) ** 2
    if n_max is None or t == 0:
        # equal widths overlap only with n = 0
        n_max = default_term_count(x, t) if n_max is None else 0

    for n in range(min(OVERLAP_CHECK_STATES, n_max) + 1):
        analytic = width_mismatch_overlap(n, kappa)
        numeric = radial_overlap_quadrature(n, b_mid, b_i)
        if abs(numeric - analytic) > OVERLAP_CHECK_TOLERANCE:
            raise OracleFailure(
                f"radial overlap n = {n}: quadrature {numeric:.12g} vs {analytic:.12g}"
            )

    # (-t)^n L_n^1(x); the (-1)^n is the Fourier phase of level n
    laguerre = log_laguerre(n_max, 1.0, x)
    levels = np.arange(n_max + 1)
    log_terms = laguerre.log_abs.copy()
    signs = laguerre.sign * (-1.0) ** levels
    if t > 0:
        log_terms += levels * log(t)

    if closure_denominators:
        denominators = -np.ones(n_max + 1)
    else:
        energies = np.array(
            [level_energy(derived, INTERMEDIATE_TWO_FZ, n, INTERMEDIATE_L) for n in levels]
        )
        denominators = (energies - initial.E_i) / derived.E0
        closest = int(np.argmin(np.abs(denominators)))
        if abs(denominators[closest]) < RESONANCE_TOLERANCE:
            raise OracleFailure(f"intermediate level n = {closest} is resonant")

    # amplitude carries 1 / (E_i - E_n) = -1 / (E0 d_n)
    log_terms -= np.log(np.abs(denominators))
    signs *= -np.sign(denominators)

    shift = float(np.max(log_terms))
    scaled = signs * np.exp(log_terms - shift)
    partial = np.cumsum(scaled)
    log_sum, _ = logsumexp(log_terms, b=signs, return_sign=True)
    trace = tuple(float(np.log(np.abs(value)) + shift) if value else -np.inf for value in partial)

    if n_max >= 10:
        tail = int(np.ceil(TAIL_FRACTION * (n_max + 1)))
        tail_weight = np.sum(np.abs(scaled[-tail:])) / abs(partial[-1])
        if tail_weight > TAIL_TOLERANCE:
            raise OracleFailure(
                f"second-order sum not converged at n_max = {n_max} (tail {tail_weight:.3g})",
                trace=list(trace),
            )

    v1 = coupling_strengths(derived).v1_scale
    spin_matrix = np.linalg.matrix_power(spin_matrices(spin.two_f).minus, 2)
    spin_element = abs(spin_matrix[spin.two_f // 2, 0])
    log_constant = (
        2 * log(v1 * derived.b0 / HBAR)
        + log(spin_element)
        - log(derived.E0)
        + 2 * log(HBAR * k_f)
        + log(2 * sqrt(pi) / box_side)
        + log(b_mid**2 / b_i)
        + log(4 * kappa / (1 + kappa) ** 2)
        - x / 2
    )
    log_amplitude = log_constant + float(log_sum)
    closure = log_amplitude_integer(derived, initial, spin, box_side, max_p2=0)
    ratio = float(np.exp(log_amplitude - closure))
    logger.debug(
        f"second-order sum chi0={derived.chi0:.3g} terms={n_max + 1} ratio={ratio:.9g}"
    )
    return SecondOrderResult(
        log_amplitude=log_amplitude,
        closure_log_amplitude=closure,
        ratio=ratio,
        deviation=abs(ratio - 1),
        n_terms=n_max + 1,
        chi0=derived.chi0,
        trace=trace,
    )


class ClosureTrend(NamedTuple):
    chi0: Tuple[float, ...]
    deviation: Tuple[float, ...]
    slope: float


def closure_error_trend(
    chi0_values: Sequence[float],
    match_widths: bool = False,
    box_side: float = 1.0e-2,
) -> ClosureTrend:
    """
    Closure deviation of second_order_sum over a set of chi0 and its log-log slope.

    Args:
        chi0_values: adiabaticities to scan, each <= 1e-2
        match_widths: see second_order_sum
        box_side: box side L in m

    Returns:
        ClosureTrend: deviations in input order and the fitted slope
    """
    spin = SpinQuantum(SECOND_ORDER_TWO_F, SECOND_ORDER_TWO_F)
    deviations = []
    for chi0 in chi0_values:
        derived = derive_params(config_for_chi0(chi0, spin))
        result = second_order_sum(derived, box_side=box_side, match_widths=match_widths)
        deviations.append(result.deviation)

    slope = float("nan")
    if len(chi0_values) >= 2 and all(value > 0 for value in deviations):
        slope = float(np.polyfit(np.log(chi0_values), np.log(deviations), 1)[0])
    return ClosureTrend(chi0=tuple(chi0_values), deviation=tuple(deviations), slope=slope)
