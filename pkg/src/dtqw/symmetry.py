"""Symmetry operators of the walk and numerical certification of their
(anti)commutation relations.

Certified relations, each on its stated domain:

* sublattice: the alternating-sign site operator anticommutes with the walk
  on any even ring, for any theta profile;
* particle-hole: the antiunitary built from the squared gauge transformation
  conjugates the walk into itself (times a global phase when delta != 0);
* parity: i n_beta . sigma maps the Bloch Hamiltonian at k to the one at
  2*alpha - k;
* chiral (beta = 0 only): exp(-i pi/2 m . sigma) with m = (cos theta, 0,
  -sin theta) anticommutes with the traceless Bloch Hamiltonian.

Time-shifted products of the same walk (half-coin on both sides of the shift,
or an asymmetric split offset by a sgn(theta) rotation) are built here as
well; they share the walk's spectrum while their image curves wind
differently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ID2, PAULI, SIGMA_Y, CoinParams, phs_operator, wrap_angle
from .errors import BetaNonzero, DegeneratePoint, OddRing, UnsupportedParams
from .lattice import ThetaProfile, WalkOperator, build_walk, ring_sites
from .momentum import DEGENERACY_EPS, bloch_hamiltonian, dispersion
from .topology import FrameVariant, frame_rotation

# Spectral norm up to this matrix dimension, max-entry norm beyond.
SPECTRAL_NORM_CAP = 64

RESIDUAL_TOL = 1e-12
SPECTRUM_TOL = 1e-10


def operator_norm(m: np.ndarray) -> tuple[float, str]:
    """(norm, kind): max singular value for small matrices, max entry beyond."""
    if m.shape[0] <= SPECTRAL_NORM_CAP:
        return float(np.linalg.norm(m, 2)), "spectral"
    return float(np.max(np.abs(m))), "max-entry"


@dataclass(frozen=True)
class SymmetryReport:
    """Outcome of one certified relation."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    norm: str
    context: dict = field(default_factory=dict)


def sublattice_residual(u: WalkOperator) -> float:
    """|| L U L^-1 + U || with L the alternating-sign site operator.

    Vanishes for every theta profile: a single step only couples neighboring
    sites, which alternate sign.
    """
    if u.n_sites % 2:
        raise OddRing("alternating site signs need an even ring")
    mat = u.dense()
    signs = np.repeat(1 - 2 * (ring_sites(u.n_sites) & 1), 2)
    res, _ = operator_norm(signs[:, None] * mat * signs[None, :] + mat)
    return res


def phs_residual(u: WalkOperator, p: CoinParams | None = None) -> tuple[float, complex]:
    """Best-fit residual of the particle-hole relation, plus the fitted phase.

    Computes ||Omega U Omega^-1 - lambda U|| minimized over unit-modulus
    lambda.  For delta = 0 the fitted lambda is 1; for delta != 0 the relation
    holds up to a delta-dependent global phase, which is reported rather than
    assumed.
    """
    if p is None:
        p = CoinParams(u.delta, u.alpha, u.beta, float(u.profile.thetas[0]))
    omega = phs_operator(p.alpha, p.beta)
    omega.check_commensurate(u.n_sites)
    mat = u.dense()
    d = omega.gauge_matrix(ring_sites(u.n_sites))
    conjugated = d[:, None] * mat.conj() * d.conj()[None, :]
    inner = complex(np.vdot(mat, conjugated))
    lam = inner / abs(inner) if abs(inner) > 0 else 1.0 + 0j
    res, _ = operator_norm(conjugated - lam * mat)
    return res, complex(lam)


def _pauli_dot(v: np.ndarray) -> np.ndarray:
    return np.einsum("i,ijk->jk", np.asarray(v, dtype=complex), PAULI)


def parity_residual_bloch(p: CoinParams, k: float) -> float:
    """|| P H_k P^-1 - H_{2 alpha - k} || with P = i n_beta . sigma.

    At the special momenta k = alpha + j*pi this reduces to a commutator.
    """
    k_mirror = wrap_angle(2.0 * p.alpha - k)
    for kk in (k, k_mirror):
        if math.sin(dispersion(p, kk)) < DEGENERACY_EPS:
            raise DegeneratePoint(f"gap closes at k = {kk}")
    n_beta = np.array([math.sin(p.beta), math.cos(p.beta), 0.0])
    par = 1j * _pauli_dot(n_beta)
    h_k = bloch_hamiltonian(p, k)
    h_m = bloch_hamiltonian(p, k_mirror)
    return float(np.linalg.norm(par @ h_k @ par.conj().T - h_m, 2))


def chiral_vector(theta: float) -> np.ndarray:
    """Unit vector m = (cos theta, 0, -sin theta), orthogonal to every Bloch
    vector of the beta = 0 coin."""
    return np.array([math.cos(theta), 0.0, -math.sin(theta)])


def chiral_operator(theta: float) -> np.ndarray:
    """exp(-i pi/2 m . sigma) = -i m . sigma; eigenvalues +/- i for every theta."""
    return -1j * _pauli_dot(chiral_vector(theta))


def chiral_residual(p: CoinParams, k: float) -> float:
    """Anticommutation residual of the chiral operator with the traceless
    Bloch Hamiltonian; defined only for beta = 0.

    The traceless part is used because the identity component delta*I commutes
    with everything and would fail anticommutation trivially for delta != 0.
    """
    if abs(p.beta) > 1e-12:
        raise BetaNonzero("chiral relation holds only for beta = 0 coins")
    if math.sin(dispersion(p, k)) < DEGENERACY_EPS:
        raise DegeneratePoint(f"gap closes at k = {k}")
    gamma = chiral_operator(p.theta)
    h0 = bloch_hamiltonian(p, k) - p.delta * ID2
    return float(np.linalg.norm(gamma @ h0 @ gamma.conj().T + h0, 2))


def _homogeneous_coin_layers(p: CoinParams, n_sites: int, variant) -> list:
    """Layers of the requested time-shifted product (application order)."""
    half = np.exp(-0.5j * p.delta) * (
        math.cos(p.theta / 2.0) * ID2 + 1j * math.sin(p.theta / 2.0) * SIGMA_Y
    )
    broadcast = lambda m: np.broadcast_to(m, (n_sites, 2, 2)).copy()
    if variant is FrameVariant.V1:
        return [("coin", broadcast(half)), ("shift", None), ("coin", broadcast(half))]
    sgn = math.copysign(1.0, p.theta)
    c_s = math.cos(math.pi / 4.0) * ID2 + 1j * math.sin(math.pi / 4.0) * sgn * SIGMA_Y
    first = half @ c_s
    second = c_s.conj().T @ half
    return [("coin", broadcast(first)), ("shift", None), ("coin", broadcast(second))]


def timeshift_walk(p: CoinParams, variant, n_sites: int) -> WalkOperator:
    """Rearranged one-step operator for a homogeneous alpha = beta = 0 walk.

    V1 splits the coin in half around the shift; V2 uses the asymmetric split
    offset by a quarter rotation of sign sgn(theta).  Both share the plain
    walk's spectrum.
    """
    if abs(p.alpha) > 1e-12 or abs(p.beta) > 1e-12:
        raise UnsupportedParams("time-shifted products are defined for alpha = beta = 0")
    if abs(p.theta) < 1e-12:
        raise UnsupportedParams("theta = 0 has no sign; time-shifted split undefined")
    if n_sites % 2:
        raise OddRing("ring size must be even")
    if variant is FrameVariant.IDENTITY:
        return build_walk(p, n_sites=n_sites)
    profile = ThetaProfile.homogeneous(p.theta, n_sites)
    layers = _homogeneous_coin_layers(p, n_sites, variant)
    return WalkOperator(p.delta, p.alpha, p.beta, profile, layers=layers,
                        form=f"timeshift-{variant.value.lower()}")


def spectrum_match_residual(u1: WalkOperator, u2: WalkOperator) -> float:
    """Hausdorff-style distance between the eigenvalue sets of two operators."""
    e1 = np.linalg.eigvals(u1.dense())
    e2 = np.linalg.eigvals(u2.dense())
    d = np.abs(e1[:, None] - e2[None, :])
    return float(max(np.max(np.min(d, axis=1)), np.max(np.min(d, axis=0))))


def _context(p: CoinParams, **extra) -> dict:
    ctx = {"delta": p.delta, "alpha": p.alpha, "beta": p.beta, "theta": p.theta}
    ctx.update(extra)
    return ctx


def run_symmetry_suite(p: CoinParams, n_sites: int = 8, seed: int = 0,
                       k_samples=(-2.0, -0.7, 0.4, 1.3, 2.6)) -> list[SymmetryReport]:
    """Certify every relation applicable to the given parameters.

    Returns one report per check; reports for relations whose domain excludes
    the parameters (chiral with beta != 0, time-shifted with alpha or beta
    nonzero) are simply omitted.
    """
    rng = np.random.default_rng(seed)
    reports = []
    norm_kind = "spectral" if 2 * n_sites <= SPECTRAL_NORM_CAP else "max-entry"
    u = build_walk(p, n_sites=n_sites)

    res = sublattice_residual(u)
    reports.append(SymmetryReport("SUB", res, RESIDUAL_TOL, res < RESIDUAL_TOL,
                                  norm_kind, _context(p, n_sites=n_sites)))

    res, lam = phs_residual(u, p)
    omega_op = phs_operator(p.alpha, p.beta)
    probe = rng.standard_normal((n_sites, 2)) + 1j * rng.standard_normal((n_sites, 2))
    probe /= np.linalg.norm(probe)
    sites = ring_sites(n_sites)
    involution = float(np.linalg.norm(
        omega_op.apply(omega_op.apply(probe, sites), sites) - probe))
    reports.append(SymmetryReport(
        "PHS", res, RESIDUAL_TOL, res < RESIDUAL_TOL, norm_kind,
        _context(p, n_sites=n_sites, global_phase=[lam.real, lam.imag],
                 involution_residual=involution, seed=seed)))

    ks = [k for k in k_samples
          if math.sin(dispersion(p, k)) >= DEGENERACY_EPS
          and math.sin(dispersion(p, wrap_angle(2 * p.alpha - k))) >= DEGENERACY_EPS]
    res = max(parity_residual_bloch(p, k) for k in ks)
    reports.append(SymmetryReport("PS", res, RESIDUAL_TOL, res < RESIDUAL_TOL,
                                  "spectral", _context(p, k_samples=list(ks))))

    if abs(p.beta) <= 1e-12:
        res = max(chiral_residual(p, k) for k in ks)
        reports.append(SymmetryReport("CS", res, RESIDUAL_TOL, res < RESIDUAL_TOL,
                                      "spectral", _context(p, k_samples=list(ks))))

    if abs(p.alpha) <= 1e-12 and abs(p.beta) <= 1e-12 and abs(p.theta) > 1e-12:
        u1 = timeshift_walk(p, FrameVariant.V1, n_sites)
        v1 = frame_conjugated_walk(p, FrameVariant.V1, n_sites)
        res, _ = operator_norm(u1.dense() - v1)
        reports.append(SymmetryReport("TimeShiftV1", res, RESIDUAL_TOL,
                                      res < RESIDUAL_TOL, norm_kind,
                                      _context(p, n_sites=n_sites)))

        u2 = timeshift_walk(p, FrameVariant.V2, n_sites)
        res = max(spectrum_match_residual(u, u1), spectrum_match_residual(u, u2))
        reports.append(SymmetryReport("TimeShiftV2", res, SPECTRUM_TOL,
                                      res < SPECTRUM_TOL, "eigenvalue",
                                      _context(p, n_sites=n_sites)))
    return reports


def frame_conjugated_walk(p: CoinParams, variant, n_sites: int) -> np.ndarray:
    """Dense V U V^-1 for a homogeneous walk and a frame rotation V."""
    v2 = frame_rotation(variant, p.theta)
    u = build_walk(p, n_sites=n_sites).dense()
    big_v = np.kron(np.eye(n_sites), v2)
    return big_v @ u @ big_v.conj().T


def reports_json(reports: list[SymmetryReport]) -> list[dict]:
    return [
        {
            "name": r.name,
            "residual": r.residual,
            "tolerance": r.tolerance,
            "passed": r.passed,
            "norm": r.norm,
            "context": r.context,
        }
        for r in reports
    ]
