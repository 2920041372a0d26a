"""Command-line front end.

Every analysis is a subcommand writing deterministic data files (CSV or JSON)
plus a ``<file>.meta.json`` sidecar echoing the full configuration.  Angles
are radians unless ``--degrees`` is given.  Exit codes: 0 success, 2 invalid
configuration, 3 numerical contract violation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, io
from .core import CoinParams
from .edge import (
    InitialStateCase,
    InterfaceSpec,
    analytic_edge_state,
    dynamics_experiment,
    eigen_residual,
    experiment_json_dict,
)
from .errors import NumericalContractError, ValidationError
from .lattice import (
    STATE_CSV_HEADER,
    TRAJECTORY_CSV_HEADER,
    state_table,
    trajectory_table,
)
from .momentum import BAND_CSV_HEADER, band_structure, band_table, gap_report
from .symmetry import reports_json, run_symmetry_suite
from .topology import (
    BZ_IMAGE_CSV_HEADER,
    FrameVariant,
    bz_image_table,
    invariant_json_dict,
    predicted_edge_states,
    rel_homotopic,
    rel_homotopy_invariant,
    rotated_winding,
    winding_mt,
)

_ANGLE_ARGS = ("delta", "alpha", "beta", "theta", "theta1", "theta2",
               "theta_min", "theta_max", "theta_step")

_FRAMES = {"identity": FrameVariant.IDENTITY, "v1": FrameVariant.V1, "v2": FrameVariant.V2}
_CASES = {
    "orthogonal-to-both": InitialStateCase.ORTHOGONAL_TO_BOTH,
    "overlap-one": InitialStateCase.OVERLAP_ONE,
    "overlap-both": InitialStateCase.OVERLAP_BOTH,
}

SWEEP_CSV_HEADER = ["theta", "gap_delta", "gap_delta_plus_pi", "winding",
                    "pole_k0", "pole_k1", "phase_label"]


def _family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=0.0)
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--beta", type=float, default=0.0)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="format of tabular outputs")
    parser.add_argument("--degrees", action="store_true",
                        help="interpret all angle flags in degrees")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized probe states")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtqw",
        description="one-dimensional coined quantum walks: bands, topology, "
                    "symmetries, interface edge states",
    )
    parser.add_argument("--version", action="version", version=f"dtqw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("band", help="band structure CSV plus gap report")
    p.add_argument("--theta", type=float, required=True)
    _family_flags(p)
    p.add_argument("--grid", type=int, default=512)
    _common_flags(p)
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("map", help="Brillouin-zone image curve, optionally frame-rotated")
    p.add_argument("--theta", type=float, required=True)
    _family_flags(p)
    p.add_argument("--frame", choices=sorted(_FRAMES), default="identity")
    p.add_argument("--grid", type=int, default=512)
    _common_flags(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("winding", help="winding numbers of the image curve")
    p.add_argument("--theta", type=float, required=True)
    _family_flags(p)
    p.add_argument("--grid", type=int, default=512)
    _common_flags(p)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("invariant", help="phase classification of one coin or a pair")
    p.add_argument("--theta", type=float)
    p.add_argument("--theta1", type=float)
    p.add_argument("--theta2", type=float)
    _family_flags(p)
    p.add_argument("--grid", type=int, default=512)
    _common_flags(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("symmetry", help="certify the symmetry relations numerically")
    p.add_argument("--theta", type=float, required=True)
    _family_flags(p)
    p.add_argument("--ring-size", type=int, default=8)
    _common_flags(p)
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("edge", help="closed-form interface states and their residuals")
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    _family_flags(p)
    p.add_argument("--ring-size", type=int, default=64)
    _common_flags(p)
    p.set_defaults(func=cmd_edge)

    p = sub.add_parser("evolve", help="interface dynamics experiment")
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    _family_flags(p)
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--ring-size", type=int, default=512)
    _common_flags(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="phase classification over a theta range")
    p.add_argument("--theta-min", type=float, required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--theta-step", type=float, required=True)
    _family_flags(p)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--workers", type=int, default=4)
    _common_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def _convert_degrees(args: argparse.Namespace) -> None:
    for name in _ANGLE_ARGS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(args, name, value * math.pi / 180.0)


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _validate(args: argparse.Namespace) -> list[str]:
    problems = []
    if getattr(args, "grid", 8) < 8:
        problems.append("--grid must be at least 8")
    if getattr(args, "steps", 0) < 0:
        problems.append("--steps must be nonnegative")
    ring = getattr(args, "ring_size", None)
    if ring is not None and (ring < 4 or ring % 2):
        problems.append("--ring-size must be even and at least 4")
    if args.command == "invariant":
        single = args.theta is not None
        pair = args.theta1 is not None and args.theta2 is not None
        if single == pair:
            problems.append("give either --theta or both --theta1 and --theta2")
    if args.command == "sweep":
        if args.theta_step <= 0:
            problems.append("--theta-step must be positive")
        elif args.theta_min > args.theta_max:
            problems.append("empty sweep range: --theta-min exceeds --theta-max")
    return problems


def _table_path(args, name: str) -> str:
    return os.path.join(args.out, f"{name}.{args.format}")


def _write_table(args, name: str, header: list[str], rows) -> str:
    path = _table_path(args, name)
    if args.format == "csv":
        io.write_csv(path, header, rows)
    else:
        io.write_json(path, [dict(zip(header, row)) for row in rows])
    io.write_sidecar(path, _config_echo(args), __version__)
    return path


def _write_record(args, name: str, obj) -> str:
    path = os.path.join(args.out, f"{name}.json")
    io.write_json(path, obj)
    io.write_sidecar(path, _config_echo(args), __version__)
    return path


def cmd_band(args) -> int:
    p = CoinParams(args.delta, args.alpha, args.beta, args.theta)
    b = band_structure(p, args.grid)
    _write_table(args, "band", BAND_CSV_HEADER, band_table(b))
    g = gap_report(b)
    print(io.json_text({
        "gap_at_delta": g.gap_at_delta,
        "gap_at_delta_plus_pi": g.gap_at_delta_plus_pi,
        "is_gapped": g.is_gapped,
    }), end="")
    return 0


def cmd_map(args) -> int:
    p = CoinParams(args.delta, args.alpha, args.beta, args.theta)
    rows = bz_image_table(p, _FRAMES[args.frame], args.grid)
    path = _write_table(args, "map", BZ_IMAGE_CSV_HEADER, rows)
    print(path)
    return 0


def cmd_winding(args) -> int:
    p = CoinParams(args.delta, args.alpha, args.beta, args.theta)
    result = {
        "winding_mt": winding_mt(p, +1, args.grid),
        "rotated_v1_about_x": rotated_winding(p, FrameVariant.V1, grid_size=args.grid),
        "rotated_v2_about_z": rotated_winding(p, FrameVariant.V2, grid_size=args.grid),
    }
    _write_record(args, "winding", result)
    print(io.json_text(result), end="")
    return 0


def cmd_invariant(args) -> int:
    if args.theta is not None:
        p = CoinParams(args.delta, args.alpha, args.beta, args.theta)
        result = invariant_json_dict(rel_homotopy_invariant(p, args.grid))
    else:
        p1 = CoinParams(args.delta, args.alpha, args.beta, args.theta1)
        p2 = CoinParams(args.delta, args.alpha, args.beta, args.theta2)
        result = {
            "invariant_theta1": invariant_json_dict(rel_homotopy_invariant(p1, args.grid)),
            "invariant_theta2": invariant_json_dict(rel_homotopy_invariant(p2, args.grid)),
            "rel_homotopic": rel_homotopic(p1, p2, args.grid),
            "predicted_edge_states": predicted_edge_states(p1, p2, args.grid),
        }
    _write_record(args, "invariant", result)
    print(io.json_text(result), end="")
    return 0


def cmd_symmetry(args) -> int:
    p = CoinParams(args.delta, args.alpha, args.beta, args.theta)
    reports = run_symmetry_suite(p, n_sites=args.ring_size, seed=args.seed)
    _write_record(args, "symmetry", reports_json(reports))
    for r in reports:
        print(f"{r.name}: residual {r.residual:.3e} ({r.norm} norm) "
              f"{'passed' if r.passed else 'FAILED'}")
    if not all(r.passed for r in reports):
        return 3
    return 0


def cmd_edge(args) -> int:
    spec = InterfaceSpec(args.delta, args.alpha, args.beta,
                         args.theta1, args.theta2, args.ring_size)
    u = spec.walk()
    result = {"norm_constant": None, "states": []}
    states = []
    for eta, tag in ((0.0, "eta0"), (math.pi, "eta_pi")):
        e = analytic_edge_state(spec, eta)
        states.append(e)
        residual, omega = eigen_residual(u, e)
        _write_table(args, f"edge_{tag}", STATE_CSV_HEADER, state_table(e.state))
        result["norm_constant"] = e.norm_constant
        result["states"].append({
            "eta": eta,
            "quasienergy": omega,
            "residual": residual,
            "decay_constants": [io.json_complex(a) for a in e.decay_constants],
        })
    result["mutual_overlap"] = abs(states[0].state.overlap(states[1].state))
    _write_record(args, "edge", result)
    print(io.json_text(result), end="")
    return 0


def cmd_evolve(args) -> int:
    spec = InterfaceSpec(args.delta, args.alpha, args.beta,
                         args.theta1, args.theta2, args.ring_size)
    rec = dynamics_experiment(spec, _CASES[args.case], args.steps)
    _write_table(args, "trajectory", TRAJECTORY_CSV_HEADER, trajectory_table(rec.trajectory))
    result = experiment_json_dict(rec)
    _write_record(args, "experiment", result)
    print(io.json_text(result), end="")
    return 0


def _sweep_row(p: CoinParams, grid: int) -> list:
    b = band_structure(p, grid)
    g = gap_report(b)
    if not p.is_gapped:
        return [p.theta, g.gap_at_delta, g.gap_at_delta_plus_pi, "", "", "", "Gapless"]
    inv = rel_homotopy_invariant(p, grid)
    d = invariant_json_dict(inv)
    return [p.theta, g.gap_at_delta, g.gap_at_delta_plus_pi,
            d["winding_mt"], d["pole_k0"], d["pole_k1"], d["phase_label"]]


def cmd_sweep(args) -> int:
    count = int(math.floor((args.theta_max - args.theta_min) / args.theta_step + 1e-9)) + 1
    thetas = [args.theta_min + i * args.theta_step for i in range(count)]
    params = [CoinParams(args.delta, args.alpha, args.beta, t) for t in thetas]
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(lambda p: _sweep_row(p, args.grid), params))
    _write_table(args, "sweep", SWEEP_CSV_HEADER, rows)
    print(f"swept {len(rows)} points")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.degrees:
        _convert_degrees(args)
    problems = _validate(args)
    if problems:
        for msg in problems:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    try:
        return args.func(args)
    except NumericalContractError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
