# majorana/hub/spin_algebra.py

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod, sqrt
from typing import NamedTuple

import numpy as np

from majorana.utilities.constants import MAX_TWO_F
from majorana.utilities.errors import DomainError


@dataclass(frozen=True)
class SpinQuantum:
    """Hyperfine spin F and projection F_z, both stored doubled.

    Args:
        two_f: 2F
        two_fz: 2F_z
    """

    two_f: int
    two_fz: int

    def __post_init__(self):
        _check_total(self.two_f)
        if abs(self.two_fz) > self.two_f:
            raise DomainError(f"|2F_z| = {abs(self.two_fz)} exceeds 2F = {self.two_f}")
        if (self.two_f - self.two_fz) % 2:
            raise DomainError(
                f"2F_z = {self.two_fz} and 2F = {self.two_f} differ in parity"
            )

    @property
    def f(self) -> Fraction:
        return Fraction(self.two_f, 2)

    @property
    def fz(self) -> Fraction:
        return Fraction(self.two_fz, 2)

    @property
    def is_integer(self) -> bool:
        return self.two_f % 2 == 0

    @property
    def dim(self) -> int:
        return self.two_f + 1


class SpinMatrices(NamedTuple):
    """Dense spin operators in the basis F_z = F, F-1, ..., -F."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    plus: np.ndarray
    minus: np.ndarray


def _check_total(two_f: int) -> None:
    if two_f < 1:
        raise DomainError(f"2F must be at least 1, got {two_f}")
    if two_f > MAX_TWO_F:
        raise DomainError(f"2F = {two_f} is above the supported maximum {MAX_TWO_F}")


def _lowering_squared(two_f: int, two_m: int) -> int:
    """(F + m)(F - m + 1), the integer square of the ladder coefficient."""
    return ((two_f + two_m) * (two_f - two_m + 2)) // 4


def lowering_coefficient(two_f: int, two_m: int) -> float:
    """
    Matrix element <m-1|F_-|m> = sqrt(F(F+1) - m(m-1)).

    Args:
        two_f: 2F
        two_m: 2m, the projection being lowered

    Returns:
        float: non-negative ladder coefficient
    """
    _check_total(two_f)
    if abs(two_m) > two_f or (two_f - two_m) % 2:
        raise DomainError(f"2m = {two_m} is not a projection of 2F = {two_f}")
    if two_m - 2 < -two_f:
        raise DomainError(f"lowering 2m = {two_m} leaves the multiplet 2F = {two_f}")
    return sqrt(_lowering_squared(two_f, two_m))


def spin_matrices(two_f: int) -> SpinMatrices:
    """
    Build F_x, F_y, F_z and the ladder operators for spin F.

    Index i of the basis holds F_z = F - i.

    Args:
        two_f: 2F

    Returns:
        SpinMatrices: dense complex matrices of size 2F+1
    """
    _check_total(two_f)
    dim = two_f + 1
    two_m = two_f - 2 * np.arange(dim)

    minus = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - 1):
        minus[i + 1, i] = sqrt(_lowering_squared(two_f, int(two_m[i])))
    plus = minus.conj().T.copy()

    f_x = (plus + minus) / 2
    f_y = (plus - minus) / 2j
    f_z = np.diag(two_m / 2).astype(complex)
    return SpinMatrices(x=f_x, y=f_y, z=f_z, plus=plus, minus=minus)


def lowering_power_element(state: SpinQuantum, two_fz_final: int) -> float:
    """
    <F_zf|F_-^p|F_zi> as a product of single ladder steps, p = F_zi - F_zf.

    Args:
        state: initial spin state
        two_fz_final: 2F_zf

    Returns:
        float: strictly positive matrix element
    """
    if (state.two_fz - two_fz_final) % 2:
        raise DomainError(
            f"2F_zi = {state.two_fz} to 2F_zf = {two_fz_final} is not an integer number of steps"
        )
    if two_fz_final >= state.two_fz:
        raise DomainError("final projection must lie below the initial one")
    if two_fz_final < -state.two_f:
        raise DomainError(f"2F_zf = {two_fz_final} is below -2F = {-state.two_f}")

    squared = prod(
        _lowering_squared(state.two_f, two_m)
        for two_m in range(state.two_fz, two_fz_final, -2)
    )
    return sqrt(squared)


def angular_factor_integer(two_f: int, p: int) -> float:
    """
    |<0|F_-^p|p>|^2 = (F+p)!/(F-p)! for integer F.

    Args:
        two_f: 2F, even
        p: number of ladder steps

    Returns:
        float: the angular factor
    """
    _check_total(two_f)
    if two_f % 2:
        raise DomainError(f"2F = {two_f} is not an integer spin")
    f = two_f // 2
    if p < 1 or p > f:
        raise DomainError(f"p = {p} must lie in 1..F = {f}")
    return float(factorial(f + p) // factorial(f - p))


def angular_factor_half_integer(two_f: int, p: int) -> float:
    """
    |<-1/2|F_-^p|p-1/2>|^2 = (F+1/2)(F+p-1/2)!/(F-p+1/2)! for half-integer F.

    Args:
        two_f: 2F, odd
        p: number of ladder steps

    Returns:
        float: the angular factor
    """
    _check_total(two_f)
    if two_f % 2 == 0:
        raise DomainError(f"2F = {two_f} is not a half-integer spin")
    top = (two_f + 1) // 2  # F + 1/2
    if p < 1 or p > top:
        raise DomainError(f"p = {p} must lie in 1..F+1/2 = {top}")
    return float(top * factorial(top + p - 1) // factorial(top - p))
