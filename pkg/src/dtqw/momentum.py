"""Momentum-space analysis of the translation-invariant walk.

For a homogeneous coin the one-step operator diagonalizes in the plane-wave
basis; at quasimomentum k it reduces to the 2x2 matrix
``diag(exp(-ik), exp(ik)) @ C``.  Its effective Hamiltonian is

    H_k = delta*I + omega_k * (n_k . sigma),

with the quasienergy dispersion ``cos(omega_k) = cos(theta) cos(k - alpha)``
(omega_k in [0, pi]) and the unit Bloch vector

    n_k = (sin(theta) sin(k-a'), -sin(theta) cos(k-a'), cos(theta) sin(k-a)) / sin(omega_k),

where a = alpha and a' = alpha + beta.  The quasienergy bands are
delta +/- omega_k, each defined modulo 2*pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import io
from .core import PAULI, ID2, CoinParams, coin_matrix, wrap_angle, wrap_angles
from .errors import DegeneratePoint

# Below this value of sin(omega_k) a grid point counts as degenerate
# (gap closing); the Bloch vector is undefined there.
DEGENERACY_EPS = 1e-9

DEFAULT_GRID = 512


def dispersion(p: CoinParams, k) -> float | np.ndarray:
    """Quasienergy omega_k in [0, pi]; accepts scalar or array k."""
    c = np.cos(p.theta) * np.cos(np.asarray(k, dtype=float) - p.alpha)
    w = np.arccos(np.clip(c, -1.0, 1.0))
    return float(w) if np.isscalar(k) or np.ndim(k) == 0 else w


def _bloch_vectors(p: CoinParams, k: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bloch vectors on a k-array: (vectors, sin_omega, degenerate mask)."""
    k = np.asarray(k, dtype=float)
    omega = dispersion(p, k)
    sin_w = np.sin(omega)
    degenerate = sin_w < DEGENERACY_EPS
    st, ct = math.sin(p.theta), math.cos(p.theta)
    ka = k - p.alpha
    kap = k - (p.alpha + p.beta)
    raw = np.stack([st * np.sin(kap), -st * np.cos(kap), ct * np.sin(ka)], axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        n = raw / sin_w[..., None]
    n[degenerate] = np.nan
    return n, sin_w, degenerate


def bloch_vector(p: CoinParams, k: float) -> np.ndarray:
    """Unit Bloch vector n_k.

    Raises DegeneratePoint at momenta where the gap closes (sin omega_k ~ 0).
    """
    n, _, degenerate = _bloch_vectors(p, np.array([float(k)]))
    if degenerate[0]:
        raise DegeneratePoint(f"Bloch vector undefined at k = {k} (omega in {{0, pi}})")
    return n[0]


def bloch_hamiltonian(p: CoinParams, k: float) -> np.ndarray:
    """H_k = delta*I + omega_k n_k . sigma (Hermitian, eigenvalues delta +/- omega_k)."""
    omega = dispersion(p, k)
    n = bloch_vector(p, k)
    return p.delta * ID2 + omega * np.einsum("i,ijk->jk", n.astype(complex), PAULI)


def momentum_step_matrix(p: CoinParams, k: float) -> np.ndarray:
    """The 2x2 walk matrix at momentum k: diag(exp(-ik), exp(ik)) @ C.

    Satisfies expm(-1j * bloch_hamiltonian(p, k)) == momentum_step_matrix(p, k);
    the sign of the shift phases is pinned by that identity.
    """
    return np.diag([np.exp(-1j * k), np.exp(1j * k)]) @ coin_matrix(p)


def k_grid(grid_size: int) -> np.ndarray:
    """Uniform Brillouin-zone grid over (-pi, pi], endpoint -pi excluded."""
    return -np.pi + 2.0 * np.pi * np.arange(1, grid_size + 1) / grid_size


@dataclass(frozen=True)
class BlochPoint:
    """One momentum sample: quasienergy omega and Bloch vector n (None if degenerate)."""

    k: float
    omega: float
    n: np.ndarray | None

    @property
    def degenerate(self) -> bool:
        return self.n is None


@dataclass(eq=False)
class BandStructure:
    """Dispersion and Bloch vectors sampled on a uniform closed k-grid."""

    params: CoinParams
    k: np.ndarray
    omega: np.ndarray
    n: np.ndarray  # (grid_size, 3); NaN rows at degenerate points
    degenerate: np.ndarray  # bool mask
    grid_size: int

    def points(self) -> list[BlochPoint]:
        return [
            BlochPoint(float(k), float(w), None if d else v)
            for k, w, v, d in zip(self.k, self.omega, self.n, self.degenerate)
        ]

    def quasienergies(self) -> tuple[np.ndarray, np.ndarray]:
        """Both bands delta +/- omega_k, wrapped to the first Floquet zone."""
        return (
            wrap_angles(self.params.delta + self.omega),
            wrap_angles(self.params.delta - self.omega),
        )


@dataclass(frozen=True)
class GapReport:
    """Sizes of the two quasienergy gaps (around delta and around delta + pi)."""

    gap_at_delta: float
    gap_at_delta_plus_pi: float
    is_gapped: bool


def band_structure(p: CoinParams, grid_size: int = DEFAULT_GRID) -> BandStructure:
    """Sample dispersion and Bloch vectors over the Brillouin zone.

    Degenerate grid points (gap closings) are flagged, not fatal, so gapless
    parameters can still be tabulated.
    """
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    ks = k_grid(grid_size)
    omega = dispersion(p, ks)
    n, _, degenerate = _bloch_vectors(p, ks)
    return BandStructure(p, ks, omega, n, degenerate, grid_size)


def gap_report(b: BandStructure, tol: float = DEGENERACY_EPS) -> GapReport:
    """Gap sizes from the sampled band: 2*min(omega) and 2*(pi - max(omega))."""
    g0 = 2.0 * float(np.min(b.omega))
    g1 = 2.0 * float(np.pi - np.max(b.omega))
    return GapReport(g0, g1, g0 > tol and g1 > tol)


def special_points(alpha: float) -> tuple[float, float]:
    """The two parity-invariant momenta alpha and alpha + pi, wrapped to the BZ.

    Band extrema sit there, and the gaps close there when theta reaches 0 or pi.
    """
    return wrap_angle(alpha), wrap_angle(alpha + np.pi)


BAND_CSV_HEADER = ["k", "omega_plus", "omega_minus", "n_x", "n_y", "n_z"]


def band_table(b: BandStructure) -> list[list[float]]:
    """Rows for the band-structure CSV (one row per grid point)."""
    wp, wm = b.quasienergies()
    return [
        [float(k), float(p_), float(m_), float(v[0]), float(v[1]), float(v[2])]
        for k, p_, m_, v in zip(b.k, wp, wm, b.n)
    ]


def write_band_csv(b: BandStructure, path) -> None:
    io.write_csv(path, BAND_CSV_HEADER, band_table(b))
