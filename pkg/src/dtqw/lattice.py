"""Position-space walk engine on a finite ring.

Sites are labeled -N/2 .. N/2-1 (N even) so an interface condition written
as "x < 0 vs x >= 0" transfers verbatim; periodic wrapping puts a second
domain wall between sites N/2-1 and -N/2.  One step applies the per-site
coin and then the coin-conditioned shift: right-moving amplitudes advance
one site, left-moving amplitudes retreat one site.

Quasienergies follow the convention U v = exp(-i*omega) v.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import CoinParams, coin_matrix, wrap_angles
from .errors import DimensionMismatch, OddRing, TooLarge

# Dense materialization / eigensolve cap (2N x 2N matrices).
DENSE_CAP = 512


def ring_sites(n_sites: int) -> np.ndarray:
    return np.arange(-(n_sites // 2), n_sites // 2)


@dataclass(eq=False)
class ThetaProfile:
    """Per-site coin angles theta_x on an even-length ring."""

    thetas: np.ndarray

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float).copy()
        if self.thetas.ndim != 1 or self.n_sites < 2 or self.n_sites % 2:
            raise OddRing("profile length must be even and at least 2")
        self.thetas.setflags(write=False)

    @property
    def n_sites(self) -> int:
        return self.thetas.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return ring_sites(self.n_sites)

    @classmethod
    def homogeneous(cls, theta: float, n_sites: int) -> "ThetaProfile":
        return cls(np.full(n_sites, float(theta)))

    @classmethod
    def sharp_interface(cls, theta1: float, theta2: float, n_sites: int) -> "ThetaProfile":
        """theta1 on x < 0, theta2 on x >= 0 (domain walls at 0 and at the wrap)."""
        thetas = np.where(ring_sites(n_sites) < 0, float(theta1), float(theta2))
        return cls(thetas)

    @property
    def is_homogeneous(self) -> bool:
        return bool(np.all(self.thetas == self.thetas[0]))


@dataclass(eq=False)
class WalkerState:
    """Spinor amplitudes (a_x, b_x) per site; treat as immutable."""

    amps: np.ndarray  # (n_sites, 2) complex

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).copy()
        if self.amps.ndim != 2 or self.amps.shape[1] != 2:
            raise DimensionMismatch("amplitudes must have shape (n_sites, 2)")
        self.amps.setflags(write=False)

    @property
    def n_sites(self) -> int:
        return self.amps.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return ring_sites(self.n_sites)

    @classmethod
    def localized(cls, n_sites: int, x: int, spinor=(1.0, 0.0)) -> "WalkerState":
        amps = np.zeros((n_sites, 2), dtype=complex)
        amps[x + n_sites // 2] = np.asarray(spinor, dtype=complex)
        state = cls(amps)
        return state.normalized()

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "WalkerState":
        return WalkerState(self.amps / self.norm())

    def overlap(self, other: "WalkerState") -> complex:
        """<self|other>."""
        if other.n_sites != self.n_sites:
            raise DimensionMismatch("states live on different rings")
        return complex(np.vdot(self.amps, other.amps))

    def site_probabilities(self) -> np.ndarray:
        return np.sum(np.abs(self.amps) ** 2, axis=1)

    def translated(self, shift: int) -> "WalkerState":
        return WalkerState(np.roll(self.amps, shift, axis=0))

    def flat(self) -> np.ndarray:
        """Amplitudes flattened site-major: index 2*i + coin."""
        return self.amps.reshape(-1)


def _shift(amps: np.ndarray) -> np.ndarray:
    out = np.empty_like(amps)
    out[:, 0] = np.roll(amps[:, 0], 1)
    out[:, 1] = np.roll(amps[:, 1], -1)
    return out


def _coin_layer(coins: np.ndarray, amps: np.ndarray) -> np.ndarray:
    return np.einsum("nij,nj->ni", coins, amps)


@dataclass(eq=False)
class WalkOperator:
    """Unitary one-step operator on the ring, a product of coin and shift layers.

    ``form`` distinguishes the plain coin-then-shift walk from rearranged
    (time-shifted) products that share its spectrum.
    """

    delta: float
    alpha: float
    beta: float
    profile: ThetaProfile
    layers: list = field(repr=False)
    form: str = "walk"

    @property
    def n_sites(self) -> int:
        return self.profile.n_sites

    def coin_params_at(self, x: int) -> CoinParams:
        return CoinParams(self.delta, self.alpha, self.beta,
                          float(self.profile.thetas[x + self.n_sites // 2]))

    def apply_array(self, amps: np.ndarray) -> np.ndarray:
        for kind, payload in self.layers:
            if kind == "coin":
                amps = _coin_layer(payload, amps)
            else:
                amps = _shift(amps)
        return amps

    def apply(self, s: WalkerState) -> WalkerState:
        if s.n_sites != self.n_sites:
            raise DimensionMismatch("state ring size does not match the operator")
        return WalkerState(self.apply_array(s.amps))

    def dense(self) -> np.ndarray:
        """Materialize the 2N x 2N matrix (site-major index 2*i + coin)."""
        if self.n_sites > DENSE_CAP:
            raise TooLarge(f"dense() capped at {DENSE_CAP} sites")
        n = self.n_sites
        mat = np.eye(2 * n, dtype=complex)
        for kind, payload in self.layers:
            if kind == "coin":
                layer = np.zeros((2 * n, 2 * n), dtype=complex)
                idx = 2 * np.arange(n)
                for a in (0, 1):
                    for b in (0, 1):
                        layer[idx + a, idx + b] = payload[:, a, b]
            else:
                layer = np.zeros((2 * n, 2 * n), dtype=complex)
                i = np.arange(n)
                layer[2 * ((i + 1) % n), 2 * i] = 1.0
                layer[2 * ((i - 1) % n) + 1, 2 * i + 1] = 1.0
            mat = layer @ mat
        return mat


def site_coins(delta: float, alpha: float, beta: float, profile: ThetaProfile) -> np.ndarray:
    """Per-site coin matrices, shape (n_sites, 2, 2)."""
    return np.stack([
        coin_matrix(CoinParams(delta, alpha, beta, t)) for t in profile.thetas
    ])


def build_walk(p: CoinParams, profile: ThetaProfile | None = None,
               n_sites: int | None = None) -> WalkOperator:
    """Coin-then-shift walk for the given parameters.

    With no profile, a homogeneous one is built from ``p.theta`` and
    ``n_sites``; with a profile, its angles override ``p.theta``.
    """
    if profile is None:
        if n_sites is None:
            raise ValueError("need either a profile or n_sites")
        profile = ThetaProfile.homogeneous(p.theta, n_sites)
    elif n_sites is not None and n_sites != profile.n_sites:
        raise DimensionMismatch("n_sites disagrees with the profile length")
    n = profile.n_sites
    if n % 2:
        raise OddRing("ring size must be even")
    if n < 4:
        raise ValueError("ring size must be at least 4")
    coins = site_coins(p.delta, p.alpha, p.beta, profile)
    return WalkOperator(p.delta, p.alpha, p.beta, profile,
                        layers=[("coin", coins), ("shift", None)])


def step(u: WalkOperator, s: WalkerState) -> WalkerState:
    """One time step; norm-preserving to round-off."""
    return u.apply(s)


@dataclass(eq=False)
class Trajectory:
    """Observables recorded every step plus periodic state snapshots.

    ``staggered_prob`` is the parity-signed window sum of site probabilities,
    sum_x (-1)^x p_x; a plain window sum can miss period-2 interference of two
    gap states whose density profile balances even and odd sites.
    """

    times: np.ndarray
    interface_prob: np.ndarray
    staggered_prob: np.ndarray
    mean_x: np.ndarray
    sigma_x: np.ndarray
    snapshot_times: list
    snapshots: list
    window_center: int
    window_halfwidth: int


def window_sites(center: int, halfwidth: int, n_sites: int) -> np.ndarray:
    """Ring-wrapped site labels within +/- halfwidth of a center site."""
    labels = (np.arange(center - halfwidth, center + halfwidth + 1) + n_sites // 2) % n_sites
    return np.unique(labels) - n_sites // 2


def _observables(s: WalkerState, window_idx: np.ndarray,
                 window_signs: np.ndarray) -> tuple[float, float, float, float]:
    probs = s.site_probabilities()
    sites = s.sites
    mean = float(probs @ sites)
    var = float(probs @ (sites - mean) ** 2)
    in_win = probs[window_idx]
    return (float(np.sum(in_win)), float(window_signs @ in_win), mean,
            float(np.sqrt(max(var, 0.0))))


def evolve(u: WalkOperator, s0: WalkerState, steps: int, record_every: int = 1,
           window_center: int = 0, window_halfwidth: int = 5) -> Trajectory:
    """Evolve ``steps`` steps, recording window probability, mean position and
    spread every step, and state snapshots every ``record_every`` steps."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if s0.n_sites != u.n_sites:
        raise DimensionMismatch("state ring size does not match the operator")
    labels = window_sites(window_center, window_halfwidth, u.n_sites)
    win = labels + u.n_sites // 2
    signs = 1.0 - 2.0 * (labels & 1)

    times = np.arange(steps + 1)
    iprob = np.empty(steps + 1)
    stag = np.empty(steps + 1)
    mean_x = np.empty(steps + 1)
    sigma_x = np.empty(steps + 1)
    snapshot_times = [0]
    snapshots = [s0]

    state = s0
    iprob[0], stag[0], mean_x[0], sigma_x[0] = _observables(state, win, signs)
    for t in range(1, steps + 1):
        state = u.apply(state)
        iprob[t], stag[t], mean_x[t], sigma_x[t] = _observables(state, win, signs)
        if t % record_every == 0 or t == steps:
            if snapshot_times[-1] != t:
                snapshot_times.append(t)
                snapshots.append(state)
    return Trajectory(times, iprob, stag, mean_x, sigma_x, snapshot_times, snapshots,
                      window_center, window_halfwidth)


@dataclass(eq=False)
class SpectralData:
    """Full eigendecomposition of a materialized walk operator.

    Eigenphases are quasienergies in (-pi, pi] sorted ascending; eigenvector
    columns are orthonormal; ``max_residual`` bounds ||U v - exp(-i w) v||
    over all pairs.
    """

    eigenphases: np.ndarray
    vectors: np.ndarray  # (2N, 2N), columns aligned with eigenphases
    participation_ratios: np.ndarray
    max_residual: float

    @property
    def n_sites(self) -> int:
        return self.vectors.shape[0] // 2

    def state(self, i: int) -> WalkerState:
        return WalkerState(self.vectors[:, i].reshape(-1, 2))

    def site_probabilities(self) -> np.ndarray:
        """Per-eigenvector site probability distributions, shape (2N, n_sites)."""
        v = self.vectors.reshape(self.n_sites, 2, -1)
        return np.sum(np.abs(v) ** 2, axis=1).T


def diagonalize(u: WalkOperator) -> SpectralData:
    """Dense eigendecomposition via a complex Schur form.

    The Schur transform of a unitary matrix is diagonal up to round-off, so the
    orthonormal Schur basis doubles as an eigenbasis.
    """
    if u.n_sites > DENSE_CAP:
        raise TooLarge(f"diagonalize() capped at {DENSE_CAP} sites")
    mat = u.dense()
    t, z = scipy.linalg.schur(mat, output="complex")
    eigvals = np.diag(t)
    omega = wrap_angles(-np.angle(eigvals))
    order = np.argsort(omega, kind="stable")
    omega = omega[order]
    vectors = z[:, order]
    eigvals = eigvals[order]

    residual = float(np.max(np.linalg.norm(mat @ vectors - vectors * eigvals[None, :], axis=0)))
    probs = np.sum(np.abs(vectors.reshape(u.n_sites, 2, -1)) ** 2, axis=1)
    ipr = np.sum(probs**2, axis=0)
    return SpectralData(omega, vectors, ipr, residual)


def localization_report(spectral: SpectralData, window) -> list[tuple[float, float, float]]:
    """(eigenphase, probability weight in window, participation ratio) per
    eigenvector, sorted by weight, heaviest first.

    ``window`` is an iterable of site labels.
    """
    n = spectral.n_sites
    idx = np.asarray([(int(x) + n // 2) % n for x in window], dtype=int)
    probs = spectral.site_probabilities()
    weights = np.sum(probs[:, idx], axis=1)
    rows = [
        (float(w), float(wt), float(ipr))
        for w, wt, ipr in zip(spectral.eigenphases, weights, spectral.participation_ratios)
    ]
    rows.sort(key=lambda r: -r[1])
    return rows


STATE_CSV_HEADER = ["x", "re_a", "im_a", "re_b", "im_b", "prob"]
TRAJECTORY_CSV_HEADER = ["t", "interface_prob", "mean_x", "sigma_x"]
SPECTRUM_CSV_HEADER = ["index", "eigenphase", "window_weight", "ipr"]


def state_table(s: WalkerState) -> list[list[float]]:
    probs = s.site_probabilities()
    return [
        [int(x), a.real, a.imag, b.real, b.imag, float(p)]
        for x, (a, b), p in zip(s.sites, s.amps, probs)
    ]


def trajectory_table(traj: Trajectory) -> list[list[float]]:
    return [
        [int(t), float(p), float(m), float(s)]
        for t, p, m, s in zip(traj.times, traj.interface_prob, traj.mean_x, traj.sigma_x)
    ]


def spectrum_table(spectral: SpectralData, window) -> list[list[float]]:
    n = spectral.n_sites
    idx = np.asarray([(int(x) + n // 2) % n for x in window], dtype=int)
    weights = np.sum(spectral.site_probabilities()[:, idx], axis=1)
    return [
        [i, float(w), float(wt), float(ipr)]
        for i, (w, wt, ipr) in enumerate(
            zip(spectral.eigenphases, weights, spectral.participation_ratios)
        )
    ]
