"""Phase classification of gapped walks from their Brillouin-zone image curves.

The Bloch vectors of all gapped coins sweep out a subset of the unit sphere:
the sphere minus one great circle, plus the two points where that circle
crosses the XY-plane.  The missing circle lies in the plane spanned by the
Z-axis and the in-plane unit vector n_beta = (sin beta, cos beta, 0); the two
surviving points +/- n_beta act as poles connecting the hemispheres.  That
punctured sphere deformation-retracts onto a circle, so every image curve has
a well-defined winding number even without chiral symmetry.

The winding alone does not separate phases (it is the same for every gapped
theta).  What does separate them is where the curve sits at the two special
momenta k_j = alpha + j*pi: the image there is forced onto a pole, and which
pole is hit at which k_j depends only on sgn(theta).  Two gapped coins of the
same family are deformable into each other with the special-momentum values
held fixed iff they agree on both the winding and the pole assignment, which
yields a two-phase classification and predicts two interface-localized states
(one per gap) between distinct phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import io
from .core import ID2, SIGMA_Y, PAULI, CoinParams, wrap_angle
from .errors import (
    CurveHitsAxis,
    GaplessParameters,
    GridTooCoarse,
    MixedFamilies,
    OnExcludedCircle,
    PoleMismatch,
    UndefinedSign,
)
from .momentum import DEFAULT_GRID, _bloch_vectors, bloch_vector, k_grid, special_points

# Projections shorter than this count as "on the excluded circle" / "on the axis".
PROJECTION_EPS = 1e-9

_Z_AXIS = np.array([0.0, 0.0, 1.0])


class FrameVariant(Enum):
    """Rotating frames that trade the theta-dependence of the chiral operator
    for a theta-dependent change of basis.

    V1 is the half-coin rotation exp(i*(theta/2)*sigma_y); it moves every image
    curve into the YZ-plane (fixed chiral axis X).  V2 additionally offsets the
    half angle by sgn(theta)*pi/4, landing the curves in the XY-plane (fixed
    chiral axis Z).  Both frames are unitarily equivalent to the lab frame, yet
    their image curves wind differently.
    """

    IDENTITY = "Identity"
    V1 = "V1"
    V2 = "V2"

    @property
    def gamma_axis(self) -> np.ndarray | None:
        """Fixed axis of the frame's theta-independent chiral operator."""
        if self is FrameVariant.V1:
            return np.array([1.0, 0.0, 0.0])
        if self is FrameVariant.V2:
            return np.array([0.0, 0.0, 1.0])
        return None


class PhaseLabel(Enum):
    THETA_POSITIVE = "ThetaPositive"
    THETA_NEGATIVE = "ThetaNegative"


@dataclass(frozen=True)
class ManifoldFrame:
    """Orthonormal in-plane frame (n_beta, e_w) used by the circle retraction.

    n_beta = (sin beta, cos beta, 0) points at the north pole; e_w = Z x n_beta
    spans the retraction circle together with n_beta.  The excluded great
    circle lies in the plane of the Z-axis and n_beta.
    """

    beta: float
    n_beta: np.ndarray
    e_w: np.ndarray


def manifold_frame(beta: float) -> ManifoldFrame:
    beta = wrap_angle(beta)
    n_beta = np.array([math.sin(beta), math.cos(beta), 0.0])
    e_w = np.cross(_Z_AXIS, n_beta)
    return ManifoldFrame(beta, n_beta, e_w)


def retract(v: np.ndarray, frame: ManifoldFrame, eps: float = PROJECTION_EPS) -> float:
    """Retraction angle of a point of the punctured sphere onto the circle.

    Angles are measured from n_beta towards e_w, so the north pole maps to 0
    and the south pole to pi.  Only +/-Z (and nothing else on the sphere) has
    a vanishing projection and no well-defined angle.
    """
    v = np.asarray(v, dtype=float)
    u, w = float(v @ frame.n_beta), float(v @ frame.e_w)
    if math.hypot(u, w) <= eps:
        raise OnExcludedCircle("zero projection onto the retraction plane")
    return wrap_angle(math.atan2(w, u))  # south pole reads +pi, never -pi


@dataclass(frozen=True)
class PoleAssignment:
    """Which pole the upper-band image hits at each special momentum.

    +1 means the north pole +n_beta, -1 the south pole -n_beta.  The values at
    the two momenta are always opposite (n_{k+pi} = -n_k), and the one at
    k_1 = alpha + pi equals sgn(theta).
    """

    at_k0: int
    at_k1: int


@dataclass(frozen=True)
class RelHomotopyInvariant:
    """Winding of the image curve plus its pole assignment.

    The pole data answers the two yes/no deformability questions (one per
    special momentum); both answers are stored even though they are perfectly
    anti-correlated for this coin family.
    """

    winding_mt: int
    poles: PoleAssignment
    phase_label: PhaseLabel


def _require_gapped(p: CoinParams) -> None:
    if not p.is_gapped:
        raise GaplessParameters(f"theta = {p.theta} closes both gaps")


def _accumulate_winding(phis: np.ndarray) -> int:
    """Total signed turns of a closed angle sequence, from wrapped increments."""
    closed = np.append(phis, phis[0])
    diffs = np.diff(closed)
    diffs = np.mod(diffs + np.pi, 2.0 * np.pi) - np.pi
    if np.max(np.abs(diffs)) > np.pi - 0.1:
        raise GridTooCoarse("phase step close to pi; refine the momentum grid")
    total = float(np.sum(diffs))
    turns = total / (2.0 * np.pi)
    if abs(turns - round(turns)) > 1e-6:
        raise GridTooCoarse(f"winding accumulated to non-integer {turns}")
    return int(round(turns))


def winding_mt(p: CoinParams, band: int = +1, grid_size: int = DEFAULT_GRID) -> int:
    """Winding of the band's image curve around the retraction circle.

    Positive values are counterclockwise in the (n_beta, e_w) basis viewed
    from +Z.  The value is the same for every gapped theta of a family and
    for both bands.
    """
    _require_gapped(p)
    if band not in (+1, -1):
        raise ValueError("band must be +1 or -1")
    frame = manifold_frame(p.beta)
    n, _, degenerate = _bloch_vectors(p, k_grid(grid_size))
    if degenerate.any():
        raise GaplessParameters("grid hit a degenerate point for nominally gapped theta")
    curve = band * n
    u = curve @ frame.n_beta
    w = curve @ frame.e_w
    if np.min(np.hypot(u, w)) <= PROJECTION_EPS:
        raise OnExcludedCircle("image curve touched the excluded circle off the poles")
    return _accumulate_winding(np.arctan2(w, u))


def frame_rotation(variant: FrameVariant, theta: float) -> np.ndarray:
    """SU(2) rotation of the given frame at coin angle theta."""
    theta = wrap_angle(theta)
    if variant is FrameVariant.IDENTITY:
        return ID2.copy()
    if variant is FrameVariant.V1:
        half = 0.5 * theta
    else:
        if abs(theta) < 1e-12:
            raise UndefinedSign("V2 frame depends on sgn(theta); undefined at theta = 0")
        half = 0.5 * (theta - math.copysign(math.pi / 2.0, theta))
    return math.cos(half) * ID2 + 1j * math.sin(half) * SIGMA_Y


def su2_to_rotation(v: np.ndarray) -> np.ndarray:
    """SO(3) rotation R with V (n.sigma) V^dagger = (R n).sigma."""
    r = np.empty((3, 3))
    vdag = v.conj().T
    for i in range(3):
        for j in range(3):
            r[i, j] = 0.5 * np.trace(PAULI[i] @ v @ PAULI[j] @ vdag).real
    return r


def rotated_winding(
    p: CoinParams,
    variant: FrameVariant,
    axis: np.ndarray | None = None,
    grid_size: int = DEFAULT_GRID,
) -> int:
    """Winding of the frame-rotated image curve about an axis.

    The curve n_k is rotated by the frame's SO(3) action, projected onto the
    plane orthogonal to the axis, and the angle is accumulated with the
    right-hand rule about the axis.  Default axis: the frame's chiral axis.
    """
    _require_gapped(p)
    if axis is None:
        axis = variant.gamma_axis
        if axis is None:
            raise ValueError("identity frame has no default axis; pass one explicitly")
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm < PROJECTION_EPS:
        raise ValueError("axis must be a nonzero vector")
    axis = axis / norm

    rot = su2_to_rotation(frame_rotation(variant, p.theta))
    n, _, degenerate = _bloch_vectors(p, k_grid(grid_size))
    if degenerate.any():
        raise GaplessParameters("grid hit a degenerate point for nominally gapped theta")
    curve = n @ rot.T

    ref = _Z_AXIS if abs(axis @ _Z_AXIS) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(axis, ref)
    u /= np.linalg.norm(u)
    w = np.cross(axis, u)  # (u, w, axis) right-handed

    pu = curve @ u
    pw = curve @ w
    if np.min(np.hypot(pu, pw)) <= PROJECTION_EPS:
        raise CurveHitsAxis("rotated image curve passes through the winding axis")
    return _accumulate_winding(np.arctan2(pw, pu))


def pole_assignment(p: CoinParams, tol: float = PROJECTION_EPS) -> PoleAssignment:
    """Match the upper-band image at the special momenta against the poles."""
    _require_gapped(p)
    frame = manifold_frame(p.beta)
    k0, k1 = special_points(p.alpha)
    signs = []
    for k in (k0, k1):
        v = bloch_vector(p, k)
        if np.linalg.norm(v - frame.n_beta) < tol:
            signs.append(+1)
        elif np.linalg.norm(v + frame.n_beta) < tol:
            signs.append(-1)
        else:
            raise PoleMismatch(f"image at k = {k} is not on a pole: {v}")
    return PoleAssignment(signs[0], signs[1])


def rel_homotopy_invariant(p: CoinParams, grid_size: int = DEFAULT_GRID) -> RelHomotopyInvariant:
    """The full invariant: winding plus pole assignment plus the phase label."""
    poles = pole_assignment(p)
    label = PhaseLabel.THETA_POSITIVE if poles.at_k1 > 0 else PhaseLabel.THETA_NEGATIVE
    return RelHomotopyInvariant(winding_mt(p, +1, grid_size), poles, label)


def _same_family(p1: CoinParams, p2: CoinParams, tol: float = 1e-12) -> bool:
    return all(abs(wrap_angle(a - b)) < tol for a, b in zip(p1.family(), p2.family()))


def rel_homotopic(p1: CoinParams, p2: CoinParams, grid_size: int = DEFAULT_GRID) -> bool:
    """Whether two gapped coins of one family are deformable into each other
    with the special-momentum images pinned.

    Equivalent to agreeing on the winding and on both pole assignments, which
    for this coin family reduces to sgn(theta1) == sgn(theta2).
    """
    if not _same_family(p1, p2):
        raise MixedFamilies("coins do not share (delta, alpha, beta)")
    _require_gapped(p1)
    _require_gapped(p2)
    if winding_mt(p1, +1, grid_size) != winding_mt(p2, +1, grid_size):
        return False
    return pole_assignment(p1) == pole_assignment(p2)


def predicted_edge_states(p1: CoinParams, p2: CoinParams, grid_size: int = DEFAULT_GRID) -> int:
    """Number of interface-localized states expected between the two walks:
    zero within one phase, two (one per gap) across distinct phases."""
    return 0 if rel_homotopic(p1, p2, grid_size) else 2


def _pole_letter(sign: int) -> str:
    return "N" if sign > 0 else "S"


def invariant_json_dict(inv: RelHomotopyInvariant) -> dict:
    return {
        "winding_mt": inv.winding_mt,
        "pole_k0": _pole_letter(inv.poles.at_k0),
        "pole_k1": _pole_letter(inv.poles.at_k1),
        "phase_label": inv.phase_label.value,
    }


BZ_IMAGE_CSV_HEADER = ["k", "n_x", "n_y", "n_z", "frame"]


def bz_image_table(
    p: CoinParams, variant: FrameVariant = FrameVariant.IDENTITY, grid_size: int = DEFAULT_GRID
) -> list[list]:
    """Rows (k, n_x, n_y, n_z, frame tag) of the (optionally rotated) image curve."""
    _require_gapped(p)
    rot = su2_to_rotation(frame_rotation(variant, p.theta))
    ks = k_grid(grid_size)
    n, _, _ = _bloch_vectors(p, ks)
    curve = n @ rot.T
    return [
        [float(k), float(v[0]), float(v[1]), float(v[2]), variant.value]
        for k, v in zip(ks, curve)
    ]


def write_bz_image_csv(p: CoinParams, path, variant: FrameVariant = FrameVariant.IDENTITY,
                       grid_size: int = DEFAULT_GRID) -> None:
    io.write_csv(path, BZ_IMAGE_CSV_HEADER, bz_image_table(p, variant, grid_size))
