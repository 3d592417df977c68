from fractions import Fraction
from math import factorial

import pytest

from majorana.hub.perturbation import (
    NCoefficient,
    StepSequence,
    amplitude_integer,
    amplitude_terms,
    c_factor,
    coefficient_table,
    enumerate_step_sequences,
    log_amplitude_integer,
    n_coefficient,
    n_coefficients,
    path_sum_amplitude,
    plane_wave_overlap,
    signed_n_coefficient,
)
from majorana.hub.trap_model import derive_params, surface_params
from majorana.utilities.errors import DomainError

# N_{p,0}, N_{p,1}/p, N_{p,2}/p^2 and C_p at F_zi = p, p = 1..5
N0 = [Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
N1_OVER_P = [Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1, 4), Fraction(1, 12)]
N2_OVER_P2 = [Fraction(0), Fraction(0), Fraction(0), Fraction(1, 32), Fraction(1, 40)]
C_P = [Fraction(1), Fraction(3, 2), Fraction(1), Fraction(43, 96), Fraction(3, 20)]


def test_step_sequences():
    assert [s.steps for s in enumerate_step_sequences(3)] == [(1, 1, 1), (1, 2), (2, 1)]
    # Fibonacci(p + 1)
    assert [len(enumerate_step_sequences(p)) for p in range(1, 9)] == [1, 2, 3, 5, 8, 13, 21, 34]
    for sequence in enumerate_step_sequences(7):
        assert sequence.p == 7
        assert sequence.p1 + 2 * sequence.p2 == 7


def test_step_sequence_count_is_fibonacci():
    fibonacci = [1, 1]
    while len(fibonacci) < 22:
        fibonacci.append(fibonacci[-1] + fibonacci[-2])
    for p in range(1, 21):
        assert len(enumerate_step_sequences(p)) == fibonacci[p]
    assert len(enumerate_step_sequences(20)) == 10946


def test_step_sequence_partial_sums():
    sequence = StepSequence((2, 1, 1))
    assert sequence.intermediate_sums() == [2, 3]
    assert StepSequence((1,)).intermediate_sums() == []
    with pytest.raises(DomainError):
        StepSequence((3,))
    with pytest.raises(DomainError):
        StepSequence(())


@pytest.mark.parametrize("p", range(1, 6))
def test_coefficient_table_values(p):
    assert n_coefficient(p, 0) == N0[p - 1]
    if p >= 2:
        assert n_coefficient(p, 1) / p == N1_OVER_P[p - 1]
    if p >= 4:
        assert n_coefficient(p, 2) / p**2 == N2_OVER_P2[p - 1]
    assert c_factor(p, Fraction(p)) == C_P[p - 1]


def test_n_coefficient_with_two_double_steps():
    # (2,2,1,1) and its five reorderings
    assert n_coefficient(6, 2) == Fraction(3, 8)


def test_n_coefficients_rows():
    rows = n_coefficients(6)
    assert [row.p2 for row in rows] == [0, 1, 2, 3]
    assert [row.value for row in rows] == [n_coefficient(6, p2) for p2 in range(4)]
    assert all(row.value > 0 for row in rows)
    with pytest.raises(DomainError):
        NCoefficient(p=6, p2=4, value=Fraction(1))
    with pytest.raises(DomainError):
        NCoefficient(p=6, p2=1, value=Fraction(0))


@pytest.mark.parametrize("p", range(2, 13))
def test_c_factor_falls_with_initial_projection(p):
    # a given p admits F_zi = p - 1/2 (half-integer spin) and F_zi = p
    half = c_factor(p, Fraction(2 * p - 1, 2))
    whole = c_factor(p, Fraction(p))
    assert half > whole > n_coefficient(p, 0)
    assert c_factor(1, Fraction(1)) == n_coefficient(1, 0)
    with pytest.raises(DomainError):
        c_factor(p, Fraction(p + 1))


@pytest.mark.parametrize("p", range(1, 11))
def test_n_closed_forms(p):
    assert n_coefficient(p, 0) == Fraction(1, factorial(p - 1))
    if p >= 2:
        assert n_coefficient(p, 1) == Fraction(p, 2 * factorial(p - 2))


def test_n_coefficient_domain():
    with pytest.raises(DomainError):
        n_coefficient(0, 0)
    with pytest.raises(DomainError):
        n_coefficient(3, 2)
    with pytest.raises(DomainError):
        n_coefficient(25, 0)


def test_signed_coefficients_and_terms():
    assert signed_n_coefficient(4, 1) == -n_coefficient(4, 1)
    assert signed_n_coefficient(4, 2) == n_coefficient(4, 2)
    terms = amplitude_terms(4, Fraction(4))
    assert all(term > 0 for term in terms)
    assert sum(terms) == Fraction(43, 96)


def test_c_factor_half_integer_and_caps():
    # F_zi = 3/2 uses p = 2
    assert c_factor(2, Fraction(3, 2)) == 1 + Fraction(1) / Fraction(3, 2)
    assert c_factor(4, Fraction(4), max_p2=0) == Fraction(1, 6)
    with pytest.raises(DomainError):
        c_factor(2, Fraction(3))
    with pytest.raises(DomainError):
        c_factor(1, Fraction(0))


def test_coefficient_table_rows():
    rows = coefficient_table(3)
    assert [(row.p, row.p2) for row in rows] == [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1)]
    assert rows[2].c_p == Fraction(3, 2)


def test_plane_wave_overlap():
    assert plane_wave_overlap(1.0e-6, 0.0, 1.0e-2) == pytest.approx(2 * 1.7724538509055159e-4)
    with pytest.raises(DomainError):
        plane_wave_overlap(0.0, 1.0, 1.0)


@pytest.mark.parametrize("two_f, chi0", [(2, 0.2), (4, 0.2), (6, 0.3), (8, 0.3)])
def test_path_sum_reproduces_closed_amplitude(trap_at_chi0, two_f, chi0):
    cfg = trap_at_chi0(chi0, two_f, two_f)
    derived = derive_params(cfg)
    surface = surface_params(derived, two_f)
    closed = amplitude_integer(derived, surface, cfg.spin, 1.0e-2)
    summed = path_sum_amplitude(derived, surface, cfg.spin, 1.0e-2)
    p = two_f // 2
    assert abs(summed) == pytest.approx(closed, rel=1e-10)
    assert summed / abs(summed) == pytest.approx(1j**p, abs=1e-10)


def test_log_amplitude_survives_underflow(trap_at_chi0):
    cfg = trap_at_chi0(1.0e-3, 4, 4)
    derived = derive_params(cfg)
    surface = surface_params(derived, 4)
    log_value = log_amplitude_integer(derived, surface, cfg.spin, 1.0e-2)
    assert amplitude_integer(derived, surface, cfg.spin, 1.0e-2) == 0.0
    assert log_value < -1000


def test_closure_amplitude_box_scaling(trap_at_chi0):
    cfg = trap_at_chi0(0.2, 2, 2)
    derived = derive_params(cfg)
    surface = surface_params(derived, 2)
    small = amplitude_integer(derived, surface, cfg.spin, 1.0e-2)
    large = amplitude_integer(derived, surface, cfg.spin, 1.0e-1)
    assert small / large == pytest.approx(10.0, rel=1e-12)


def test_amplitude_needs_integer_spin(trap_at_chi0):
    cfg = trap_at_chi0(0.2, 3, 3)
    derived = derive_params(cfg)
    surface = surface_params(derived, 3)
    with pytest.raises(DomainError):
        amplitude_integer(derived, surface, cfg.spin, 1.0e-2)
