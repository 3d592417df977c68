# majorana/hub/adiabatic_frame.py

from dataclasses import dataclass
from math import sqrt
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from majorana.hub.spin_algebra import SpinMatrices, spin_matrices
from majorana.hub.trap_model import DerivedParams, TrapConfig, field_direction
from majorana.utilities.constants import HBAR
from majorana.utilities.errors import DomainError, SingularFrameError


@dataclass(frozen=True)
class BisectorFrame:
    """Axis n halfway between z and the local field, n = (beta x, -beta y, alpha).

    alpha is dimensionless and beta is in 1/m.
    """

    n: np.ndarray
    alpha: float
    beta: float
    field: float  # |B| in T


class GaugePotential(NamedTuple):
    """A = A1 + A2 + A3, each a list of three spin matrices (x, y, z) in kg m/s."""

    a1: List[np.ndarray]
    a2: List[np.ndarray]
    a3: List[np.ndarray]

    def total(self) -> List[np.ndarray]:
        return [self.a1[k] + self.a2[k] + self.a3[k] for k in range(3)]


class CouplingScales(NamedTuple):
    v1_scale: float  # J
    v2_scale: float  # J


def _field_si(cfg: TrapConfig, r: Sequence[float]) -> Tuple[float, float, float]:
    b_bias = cfg.bias_field_si
    gradient = cfg.radial_gradient_si
    magnitude = float(np.hypot(b_bias, gradient * np.hypot(r[0], r[1])))
    if magnitude <= 0:
        raise SingularFrameError("singular adiabatic frame: the field vanishes")
    return b_bias, gradient, magnitude


def bisector(cfg: TrapConfig, r: Sequence[float]) -> BisectorFrame:
    """
    Rotation axis of the adiabatic frame at r.

    Args:
        cfg: trap configuration
        r: position in m

    Returns:
        BisectorFrame: n with alpha^2 = (B0+B)/2B and beta^2 = lambda^2/(2B(B0+B))
    """
    b_bias, gradient, magnitude = _field_si(cfg, r)
    alpha = sqrt((b_bias + magnitude) / (2 * magnitude))
    beta = gradient / sqrt(2 * magnitude * (magnitude + b_bias))
    n = np.array([beta * r[0], -beta * r[1], alpha])
    return BisectorFrame(n=n, alpha=alpha, beta=beta, field=magnitude)


def rotation_matrix(cfg: TrapConfig, two_f: int, r: Sequence[float]) -> np.ndarray:
    """
    U = exp(i pi n.F), taking F_z onto the local field direction.

    Args:
        cfg: trap configuration
        two_f: 2F
        r: position in m

    Returns:
        np.ndarray: unitary (2F+1) x (2F+1) matrix
    """
    frame = bisector(cfg, r)
    spin = spin_matrices(two_f)
    generator = frame.n[0] * spin.x + frame.n[1] * spin.y + frame.n[2] * spin.z
    return expm(1j * np.pi * generator)


def gradient_factor(cfg: TrapConfig, r: Sequence[float]) -> np.ndarray:
    """alpha grad(beta) - beta grad(alpha) = -lambda^3 (x, y, 0) / (2 B^2 (B + B0)), in 1/m^2."""
    b_bias, gradient, magnitude = _field_si(cfg, r)
    scale = -(gradient**3) / (2 * magnitude**2 * (magnitude + b_bias))
    return np.array([scale * r[0], scale * r[1], 0.0])


def gauge_potential(cfg: TrapConfig, two_f: int, r: Sequence[float]) -> GaugePotential:
    """
    Gauge potential -i hbar U^dagger grad U split into its three parts.

    A1 = 2 hbar alpha beta (F_y grad x + F_x grad y),
    A2 = 2 hbar beta^2 (y grad x - x grad y) F_z,
    A3 = 2 hbar (y F_x + x F_y)(alpha grad beta - beta grad alpha).

    Args:
        cfg: trap configuration
        two_f: 2F
        r: position in m

    Returns:
        GaugePotential: Cartesian components of each part
    """
    frame = bisector(cfg, r)
    spin = spin_matrices(two_f)
    g = gradient_factor(cfg, r)
    x, y = r[0], r[1]
    zero = np.zeros_like(spin.z)

    c1 = 2 * HBAR * frame.alpha * frame.beta
    a1 = [c1 * spin.y, c1 * spin.x, zero]

    c2 = 2 * HBAR * frame.beta**2
    a2 = [c2 * y * spin.z, -c2 * x * spin.z, zero]

    mixed = 2 * HBAR * (y * spin.x + x * spin.y)
    a3 = [g[0] * mixed, g[1] * mixed, zero.copy()]
    return GaugePotential(a1=a1, a2=a2, a3=a3)


def coupling_strengths(derived: DerivedParams) -> CouplingScales:
    """
    Energy scales of the one and two step spin-lowering couplings, with B ~ B0.

    Args:
        derived: trap scales

    Returns:
        CouplingScales: v1 = hbar omega0 sqrt(chi0)/4, v2 = hbar omega0 chi0^2/16
    """
    quantum = HBAR * derived.omega0
    return CouplingScales(
        v1_scale=quantum * sqrt(derived.chi0) / 4,
        v2_scale=quantum * derived.chi0**2 / 16,
    )


def coupling_operators(derived: DerivedParams, two_f: int) -> Dict[str, np.ndarray]:
    """Spin parts of V1- (i v1 F_-) and V2- (v2 F_-^2)."""
    scales = coupling_strengths(derived)
    minus = spin_matrices(two_f).minus
    return {
        "v1": 1j * scales.v1_scale * minus,
        "v2": scales.v2_scale * (minus @ minus),
    }


def _monomial_basis(degree: int) -> List[Tuple[int, int]]:
    return [(a, total - a) for total in range(degree + 1) for a in range(total + 1)]


def lab_coupling_operator(two_f: int, degree: int) -> np.ndarray:
    """
    (x+ F+ + x- F-)/2 on monomials x+^a x-^b (a + b <= degree) times spin states.

    Products that leave the truncated space are dropped.

    Args:
        two_f: 2F
        degree: highest monomial degree kept

    Returns:
        np.ndarray: dense operator, monomial index major, spin index minor
    """
    if degree < 0:
        raise DomainError(f"degree must be non-negative, got {degree}")
    spin: SpinMatrices = spin_matrices(two_f)
    monomials = _monomial_basis(degree)
    index = {monomial: i for i, monomial in enumerate(monomials)}

    raise_x = np.zeros((len(monomials), len(monomials)))
    lower_x = np.zeros((len(monomials), len(monomials)))
    for (a, b), column in index.items():
        if (a + 1, b) in index:
            raise_x[index[(a + 1, b)], column] = 1.0
        if (a, b + 1) in index:
            lower_x[index[(a, b + 1)], column] = 1.0
    return 0.5 * (np.kron(raise_x, spin.plus) + np.kron(lower_x, spin.minus))


def conserved_charge(two_f: int, degree: int, sign: int = -1) -> np.ndarray:
    """
    L + sign * F_z on the basis of lab_coupling_operator; sign=-1 gives L - F_z.

    x+^a x-^b carries L = a - b.
    """
    spin = spin_matrices(two_f)
    orbital = np.diag([float(a - b) for a, b in _monomial_basis(degree)])
    identity_orbital = np.eye(orbital.shape[0])
    identity_spin = np.eye(spin.z.shape[0])
    return np.kron(orbital, identity_spin) + sign * np.kron(identity_orbital, spin.z)


def field_projection(cfg: TrapConfig, two_f: int, r: Sequence[float]) -> np.ndarray:
    """B_hat(r) . F as a dense matrix."""
    direction = field_direction(cfg, r)
    spin = spin_matrices(two_f)
    return direction[0] * spin.x + direction[1] * spin.y + direction[2] * spin.z
