"""Coin algebra for one-dimensional coined quantum walks.

The coin family used throughout the package is the four-angle U(2) matrix

    C(delta, alpha, beta, theta) =
        exp(-i*delta) * [[cos(theta)*e^{i*alpha},  sin(theta)*e^{i*(alpha+beta)}],
                         [-sin(theta)*e^{-i*(alpha+beta)}, cos(theta)*e^{-i*alpha}]]

together with the Pauli decomposition of 2x2 matrices and the gauge
unitaries that map a complex coin onto the real-coin walk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IncommensurateAlpha

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

# Default tolerances: pure 2x2 algebra vs dense operator identities.
ALGEBRA_TOL = 1e-14
OPERATOR_TOL = 1e-12

_TWO_PI = 2.0 * math.pi


def wrap_angle(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    y = (x + math.pi) % _TWO_PI - math.pi
    if y == -math.pi:
        return math.pi
    return y


def wrap_angles(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`wrap_angle`."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, _TWO_PI) - np.pi
    return np.where(y == -np.pi, np.pi, y)


def circle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    return abs(wrap_angle(a - b))


@dataclass(frozen=True)
class CoinParams:
    """The four coin angles; all reduced to (-pi, pi] at construction.

    ``theta`` controls the gap: the walk is gapped unless theta is 0 or pi.
    ``(delta, alpha, beta)`` label the family the coin belongs to.
    """

    delta: float
    alpha: float
    beta: float
    theta: float

    def __post_init__(self):
        for name in ("delta", "alpha", "beta", "theta"):
            object.__setattr__(self, name, wrap_angle(float(getattr(self, name))))

    @property
    def is_gapped(self) -> bool:
        """True iff theta is neither 0 nor pi (both quasienergy gaps open)."""
        return abs(self.theta) > 1e-12 and abs(self.theta - math.pi) > 1e-12

    @property
    def alpha_prime(self) -> float:
        return wrap_angle(self.alpha + self.beta)

    def family(self) -> tuple[float, float, float]:
        """The (delta, alpha, beta) triple shared by a one-parameter theta family."""
        return (self.delta, self.alpha, self.beta)

    def with_theta(self, theta: float) -> "CoinParams":
        return CoinParams(self.delta, self.alpha, self.beta, theta)


def coin_matrix(p: CoinParams) -> np.ndarray:
    """The 2x2 coin unitary for the given angles."""
    ct, st = math.cos(p.theta), math.sin(p.theta)
    ea = np.exp(1j * p.alpha)
    eab = np.exp(1j * (p.alpha + p.beta))
    m = np.array([[ct * ea, st * eab], [-st / eab, ct / ea]], dtype=complex)
    return np.exp(-1j * p.delta) * m


def is_unitary(m: np.ndarray, tol: float = OPERATOR_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) < tol)


def is_special_unitary(m: np.ndarray, tol: float = OPERATOR_TOL) -> bool:
    return is_unitary(m, tol) and bool(abs(np.linalg.det(m) - 1.0) < tol)


def pauli_decompose(m: np.ndarray) -> tuple[complex, np.ndarray]:
    """Write a 2x2 matrix as c0*I + c . sigma.

    Returns ``(c0, c)`` with ``c`` a complex 3-vector; the decomposition is
    exact for any complex matrix, not only Hermitian ones.
    """
    m = np.asarray(m, dtype=complex)
    c0 = 0.5 * np.trace(m)
    c = 0.5 * np.array([np.trace(SIGMA_X @ m), np.trace(SIGMA_Y @ m), np.trace(SIGMA_Z @ m)])
    return complex(c0), c


def pauli_compose(c0: complex, c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`pauli_decompose`."""
    c = np.asarray(c, dtype=complex)
    return c0 * ID2 + c[0] * SIGMA_X + c[1] * SIGMA_Y + c[2] * SIGMA_Z


def gauge_unitary_w(alpha: float, beta: float, x: int) -> tuple[complex, np.ndarray]:
    """Site factor of the gauge unitary W at position x.

    W acts as the position-dependent phase exp(i*alpha*x) times the coin
    factor diag(1, exp(-i*beta)); conjugating the (delta, 0, 0, theta) walk
    by W produces the (delta, alpha, beta, theta) walk.
    """
    phase = complex(np.exp(1j * alpha * x))
    coin_part = np.array([[1.0, 0.0], [0.0, np.exp(-1j * beta)]], dtype=complex)
    return phase, coin_part


def is_commensurate(alpha: float, n_sites: int, tol: float = 1e-9) -> bool:
    """True iff alpha is a lattice momentum 2*pi*m/n_sites of the ring."""
    return abs(math.remainder(alpha * n_sites, _TWO_PI)) < tol


@dataclass(frozen=True)
class PhsOperator:
    """Antiunitary particle-hole operator: site phase exp(2i*alpha*x) and coin
    phase diag(1, exp(-2i*beta)) applied after complex conjugation.

    Squares to the identity for any (alpha, beta).
    """

    alpha: float
    beta: float

    def site_phase(self, x) -> np.ndarray:
        return np.exp(2j * self.alpha * np.asarray(x))

    @property
    def coin_factor(self) -> np.ndarray:
        return np.array([[1.0, 0.0], [0.0, np.exp(-2j * self.beta)]], dtype=complex)

    def apply(self, amps: np.ndarray, sites: np.ndarray) -> np.ndarray:
        """Apply to per-site spinor amplitudes of shape (n_sites, 2)."""
        amps = np.asarray(amps, dtype=complex)
        out = amps.conj() * self.site_phase(sites)[:, None]
        out[:, 1] *= np.exp(-2j * self.beta)
        return out

    def gauge_matrix(self, sites: np.ndarray) -> np.ndarray:
        """Dense diagonal of the unitary part (the squared gauge transformation)."""
        d = np.repeat(self.site_phase(sites), 2).astype(complex)
        d[1::2] *= np.exp(-2j * self.beta)
        return d

    def check_commensurate(self, n_sites: int, tol: float = 1e-9) -> None:
        if not is_commensurate(self.alpha, n_sites, tol):
            raise IncommensurateAlpha(
                f"alpha = {self.alpha} is not a multiple of 2*pi/{n_sites}; "
                "the gauge phase is not single-valued on this ring"
            )


def phs_operator(alpha: float, beta: float) -> PhsOperator:
    """Particle-hole operator for the (alpha, beta) coin family."""
    return PhsOperator(wrap_angle(alpha), wrap_angle(beta))
