# majorana/hub/perturbation.py

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from math import exp, log, pi, sqrt
from typing import List, NamedTuple, Optional, Tuple

from loguru import logger

from majorana.hub.adiabatic_frame import coupling_strengths
from majorana.hub.spin_algebra import SpinQuantum, lowering_power_element
from majorana.hub.trap_model import DerivedParams, SurfaceParams, final_wavenumber
from majorana.utilities.constants import HBAR
from majorana.utilities.errors import DomainError

MAX_STEPS: int = 24


@dataclass(frozen=True)
class StepSequence:
    """One ordering of single (1) and double (2) spin-lowering steps."""

    steps: Tuple[int, ...]

    def __post_init__(self):
        if not self.steps or any(step not in (1, 2) for step in self.steps):
            raise DomainError(f"steps must be a non-empty sequence of 1s and 2s, got {self.steps}")

    @property
    def p(self) -> int:
        return sum(self.steps)

    @property
    def p1(self) -> int:
        return self.steps.count(1)

    @property
    def p2(self) -> int:
        return self.steps.count(2)

    def intermediate_sums(self) -> List[int]:
        """Partial sums after each step except the last."""
        return list(accumulate(self.steps))[:-1]


@dataclass(frozen=True)
class NCoefficient:
    p: int
    p2: int
    value: Fraction

    def __post_init__(self):
        if not 0 <= self.p2 <= self.p // 2:
            raise DomainError(f"p2 = {self.p2} must lie in 0..{self.p // 2} for p = {self.p}")
        if self.value <= 0:
            raise DomainError(f"N_{{{self.p},{self.p2}}} must be positive, got {self.value}")


class CoefficientRow(NamedTuple):
    p: int
    p2: int
    n: Fraction
    c_p: Fraction


def _check_steps(p: int) -> None:
    if p < 1 or p > MAX_STEPS:
        raise DomainError(f"p = {p} must lie in 1..{MAX_STEPS}")


@lru_cache(maxsize=None)
def _compositions(p: int) -> Tuple[Tuple[int, ...], ...]:
    if p == 0:
        return ((),)
    found = [(1,) + rest for rest in _compositions(p - 1)]
    if p >= 2:
        found += [(2,) + rest for rest in _compositions(p - 2)]
    return tuple(found)


def enumerate_step_sequences(p: int) -> List[StepSequence]:
    """
    Every way of lowering F_z by p with single and double steps.

    Args:
        p: total number of lowering units

    Returns:
        List[StepSequence]: lexicographic order, Fibonacci(p+1) entries
    """
    _check_steps(p)
    return [StepSequence(steps) for steps in _compositions(p)]


@lru_cache(maxsize=None)
def _n_value(p: int, p2: int) -> Fraction:
    total = Fraction(0)
    for steps in _compositions(p):
        if steps.count(2) != p2:
            continue
        weight = Fraction(1)
        for partial in list(accumulate(steps))[:-1]:
            weight /= partial
        total += weight
    return total


def n_coefficient(p: int, p2: int) -> Fraction:
    """
    N_{p,p2}: sum over paths with p2 double steps of 1 / (product of intermediate partial sums).

    Args:
        p: total lowering
        p2: number of double steps, at most p // 2

    Returns:
        Fraction: positive exact value
    """
    _check_steps(p)
    if p2 < 0 or p2 > p // 2:
        raise DomainError(f"p2 = {p2} must lie in 0..{p // 2} for p = {p}")
    return _n_value(p, p2)


def n_coefficients(p: int) -> List[NCoefficient]:
    """All N_{p,p2} for p2 = 0..p // 2."""
    _check_steps(p)
    return [NCoefficient(p=p, p2=p2, value=_n_value(p, p2)) for p2 in range(p // 2 + 1)]


def signed_n_coefficient(p: int, p2: int) -> Fraction:
    """N_{p,p2} with the (-1)^p2 sign of the double-step couplings attached."""
    return (-1) ** p2 * n_coefficient(p, p2)


def _check_parity(p: int, fz_i: Fraction) -> None:
    if fz_i <= 0:
        raise DomainError(f"F_zi = {fz_i} is not a trapped projection")
    if fz_i.denominator == 1:
        expected = fz_i
    elif fz_i.denominator == 2:
        expected = fz_i + Fraction(1, 2)
    else:
        raise DomainError(f"F_zi = {fz_i} is not a half-integer")
    if p != expected:
        raise DomainError(f"p = {p} does not match F_zi = {fz_i} (expected {expected})")


def amplitude_terms(p: int, fz_i: Fraction, max_p2: Optional[int] = None) -> List[Fraction]:
    """
    Contribution of each p2 to C_p.

    The (-1)^p2 of the signed coefficients cancels against the (-i)^2 picked up by
    each x_-^2 when it is traded for p_-^2 on the Gaussian ground state, so every
    entry is positive.

    Args:
        p: total lowering
        fz_i: initial projection
        max_p2: drop terms with more double steps

    Returns:
        List[Fraction]: index p2
    """
    fz_i = Fraction(fz_i)
    _check_parity(p, fz_i)
    top = p // 2 if max_p2 is None else min(max_p2, p // 2)
    reduction = Fraction(-1)
    return [
        signed_n_coefficient(p, p2) * reduction**p2 / fz_i**p2 for p2 in range(top + 1)
    ]


def c_factor(p: int, fz_i: Fraction, max_p2: Optional[int] = None) -> Fraction:
    """
    C_p = sum over p2 of N_{p,p2} / F_zi^p2.

    Args:
        p: total lowering, F_zi for integer spin or F_zi + 1/2 otherwise
        fz_i: initial projection as a Fraction
        max_p2: optional cap on the double-step count

    Returns:
        Fraction: exact coherent sum
    """
    return sum(amplitude_terms(p, fz_i, max_p2), Fraction(0))


def coefficient_table(p_max: int) -> List[CoefficientRow]:
    """Rows (p, p2, N_{p,p2}, C_p at F_zi = p) for p = 1..p_max."""
    _check_steps(p_max)
    rows = []
    for p in range(1, p_max + 1):
        c_p = c_factor(p, Fraction(p))
        for coefficient in n_coefficients(p):
            rows.append(CoefficientRow(p=p, p2=coefficient.p2, n=coefficient.value, c_p=c_p))
    logger.debug(f"coefficient table up to p = {p_max}: {len(rows)} rows")
    return rows


def plane_wave_overlap(b_i: float, k_f: float, box_side: float) -> float:
    """
    Overlap of the Gaussian ground state with a box-normalized plane wave.

    Args:
        b_i: oscillator length in m
        k_f: wavenumber in 1/m
        box_side: box side L in m

    Returns:
        float: 2 sqrt(pi) b_i / L exp(-k_f^2 b_i^2 / 2)
    """
    if b_i <= 0 or box_side <= 0 or k_f < 0:
        raise DomainError("b_i and box_side must be positive and k_f non-negative")
    return 2 * sqrt(pi) * b_i / box_side * exp(-((k_f * b_i) ** 2) / 2)


def _integer_steps(spin: SpinQuantum, surface: SurfaceParams) -> int:
    if not spin.is_integer:
        raise DomainError("closure amplitude is defined for integer spin")
    if surface.two_fz != spin.two_fz:
        raise DomainError("surface does not belong to the initial spin state")
    return spin.two_fz // 2


def log_amplitude_integer(
    derived: DerivedParams,
    surface: SurfaceParams,
    spin: SpinQuantum,
    box_side: float,
    max_p2: Optional[int] = None,
) -> float:
    """
    Natural log of the closure amplitude magnitude; finite where the amplitude underflows.

    Args:
        derived: trap scales
        surface: initial surface
        spin: initial spin state, integer F
        box_side: box side L in m
        max_p2: keep only paths with at most this many double steps

    Returns:
        float: log |A| with |A| in J
    """
    p = _integer_steps(spin, surface)
    k_f = final_wavenumber(derived, surface)
    chi0 = derived.chi0
    c_p = c_factor(p, spin.fz, max_p2)
    spin_element = lowering_power_element(spin, 0)
    log_overlap = (
        log(2 * sqrt(pi) * surface.b_i / box_side) - (k_f * surface.b_i) ** 2 / 2
    )
    return (
        log(HBAR * derived.omega0)
        + p * log(sqrt(chi0) / 4)
        + (p - 1) * log(chi0)
        + log(spin_element)
        + p * log(derived.b0 * k_f)
        + log_overlap
        + log(float(c_p))
    )


def amplitude_integer(
    derived: DerivedParams,
    surface: SurfaceParams,
    spin: SpinQuantum,
    box_side: float,
) -> float:
    """
    |A| = hbar omega0 (sqrt(chi0)/4)^p chi0^(p-1) <0|F_-^p|F_zi> (b0 k_f)^p I0 C_p.

    Args:
        derived: trap scales
        surface: initial surface
        spin: initial spin state, integer F
        box_side: box side L in m

    Returns:
        float: amplitude magnitude in J
    """
    return exp(log_amplitude_integer(derived, surface, spin, box_side))


def path_sum_amplitude(
    derived: DerivedParams,
    surface: SurfaceParams,
    spin: SpinQuantum,
    box_side: float,
) -> complex:
    """
    Closure amplitude summed path by path from the coupling strengths.

    Every path applies i v1 (b0/hbar) p_- F_- for a single step and
    v2 x_-^2/b0^2 F_-^2 for a double step; intermediate states after a total
    lowering j sit j E0 below the initial energy. On the Gaussian initial state
    x_- = -i b_i^2/hbar p_-, and p_- on the final plane wave gives hbar k_-.

    Args:
        derived: trap scales
        surface: initial surface
        spin: initial spin state, integer F
        box_side: box side L in m

    Returns:
        complex: the amplitude in J with its overall phase i^p
    """
    p = _integer_steps(spin, surface)
    scales = coupling_strengths(derived)
    k_f = final_wavenumber(derived, surface)
    b_i = surface.b_i

    single = 1j * scales.v1_scale * derived.b0 * k_f
    double = scales.v2_scale / derived.b0**2 * (-1j * b_i**2 / HBAR) ** 2 * (HBAR * k_f) ** 2

    total = 0j
    for sequence in enumerate_step_sequences(p):
        term = complex(1.0)
        for step in sequence.steps:
            term *= single if step == 1 else double
        for partial in sequence.intermediate_sums():
            term /= partial * derived.E0
        total += term
    spin_element = lowering_power_element(spin, 0)
    return total * spin_element * plane_wave_overlap(b_i, k_f, box_side)
