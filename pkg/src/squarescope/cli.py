"""Command-line reports: inscribed squares, envelopes, and spiral checks.

Every verb reads its inputs from files, writes a JSON report plus a CSV
summary into the output directory, and optionally renders an SVG figure.
Reports are deterministic for fixed inputs and flags: floats go out with 17
significant digits, dictionaries keep insertion order, and no timestamps or
machine identifiers are recorded.

Exit codes: 0 success, 2 input error, 3 suspected zero continuum,
4 vanishing anti-diagonal loop.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import (
    SignField,
    circle_curve,
    curve_to_csv,
    ellipse_curve,
    load_curve,
    random_generic_curve,
    save_curve,
    validate_curve,
)
from .envelope import (
    antidiagonal_winding,
    degree_consistency,
    trace_quadrant_components,
)
from .errors import ContinuumSuspected, SquarescopeError, ZeroOnLoop
from .render import fig_curve, fig_envelope, fig_plane_paths, fig_squares
from .reportio import (
    load_area_spec,
    load_offsets,
    load_origin_path,
    load_relation,
    load_split_pair,
    load_trochoid_instance,
    sha256_of,
    write_csv,
    write_report,
)
from .spirals import (
    derivation_trajectory,
    is_good,
    is_relation_avoiding,
    find_spiral_angle,
    spiral_path,
    swept_area_pair,
)
from .squares import SquareType, classify_square, count_by_type, find_inscribed_squares
from .trochoid import (
    exists_solution,
    instance_period_window,
    lhs_value,
    random_instance,
    rhs_value,
    with_lambda,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONTINUUM = 3
EXIT_ZERO_ON_LOOP = 4


@dataclass
class RunConfig:
    """Shared knobs echoed into every report."""

    grid: int = 512
    tol: float = 1e-8
    seed: int = 0
    t_max: float = 40.0
    samples: int = 4096
    output_dir: str = "."

    def __post_init__(self):
        if self.grid < 64:
            raise ValueError(f"grid must be at least 64, got {self.grid}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "grid": cfg.grid,
        "tol": cfg.tol,
        "seed": cfg.seed,
        "t_max": cfg.t_max,
        "samples": cfg.samples,
        "output_dir": cfg.output_dir,
    }


def _inputs(cfg: RunConfig, files: dict) -> dict:
    entry = {
        role: {"path": str(path), "sha256": sha256_of(path)}
        for role, path in files.items()
    }
    return {"config": _config_echo(cfg), "files": entry}


def _report(command: str, cfg: RunConfig, files: dict, results=None, warnings=()):
    rep = {"command": command, "inputs": _inputs(cfg, files)}
    if results is not None:
        rep["results"] = results
    rep["warnings"] = list(warnings)
    return rep


def _out(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _worker_count() -> int:
    try:
        n = int(os.environ.get("SQUARESCOPE_THREADS", ""))
    except ValueError:
        n = 0
    return n if n >= 1 else min(8, os.cpu_count() or 1)


def _load_valid_curve(path: str):
    raw = load_curve(path)
    curve, _ = validate_curve(raw, normalize=True)
    warnings = []
    if curve is not raw:
        warnings.append("input curve was clockwise; reversed to counterclockwise")
    return curve, warnings


# ---------------------------------------------------------------------------
# squares


def cmd_squares(curve_file: str, cfg: RunConfig, svg: bool = False) -> int:
    """Inscribed-square census with cyclic-type parity verdicts."""
    curve, warnings = _load_valid_curve(curve_file)
    files = {"curve": curve_file}
    field = SignField(curve)
    try:
        search = find_inscribed_squares(curve, field, grid=cfg.grid, tol=cfg.tol)
    except ContinuumSuspected as exc:
        warnings.append(f"continuum suspected: {exc}")
        write_report(
            _report("squares", cfg, files, warnings=warnings),
            _out(cfg, "squares_report.json"),
        )
        return EXIT_CONTINUUM

    typed = [(sq, classify_square(sq)) for sq in search.squares]
    counts = count_by_type(search.squares)
    n1 = counts[SquareType.I]
    n2 = counts[SquareType.II]
    n3 = counts[SquareType.III]
    parity_ok = n1 % 2 == 1 and n2 % 2 == 0 and n3 % 2 == 0
    results = {
        "count": len(typed),
        "type_counts": {"I": n1, "II": n2, "III": n3},
        "parity": {
            "I_odd": n1 % 2 == 1,
            "II_even": n2 % 2 == 0,
            "III_even": n3 % 2 == 0,
            "verdict": "PASS" if parity_ok else "FAIL",
        },
        "squares": [
            {
                "type": kind.value,
                "corner_params": list(sq.corner_params),
                "vertices": [list(v) for v in sq.vertices],
                "residual": sq.residual,
                "jac_min_sv": sq.jac_min_sv,
            }
            for sq, kind in typed
        ],
    }
    write_report(
        _report("squares", cfg, files, results, warnings),
        _out(cfg, "squares_report.json"),
    )
    rows = [
        [i, kind.value, sq.residual, sq.jac_min_sv]
        + list(sq.corner_params)
        + list(sq.vertices.ravel())
        for i, (sq, kind) in enumerate(typed)
    ]
    header = ["index", "type", "residual", "jac_min_sv", "u0", "u1", "u2", "u3"]
    header += [f"{axis}{k}" for k in range(4) for axis in ("x", "y")]
    write_csv(_out(cfg, "squares.csv"), header, rows)
    if svg:
        fig_squares(curve, [(sq, kind.value) for sq, kind in typed], _out(cfg, "squares.svg"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# envelope


def cmd_envelope(curve_file: str, cfg: RunConfig, svg: bool = False) -> int:
    """Anti-diagonal winding, quadrant components, and degree consistency."""
    curve, warnings = _load_valid_curve(curve_file)
    files = {"curve": curve_file}
    field = SignField(curve)
    try:
        anti = antidiagonal_winding(curve, field, samples=cfg.samples)
    except ZeroOnLoop as exc:
        warnings.append(
            f"anti-diagonal loop vanishes: min norm {exc.min_norm:.3e} "
            f"at parameter {exc.at_param:.6f}"
        )
        write_report(
            _report("envelope", cfg, files, warnings=warnings),
            _out(cfg, "envelope_report.json"),
        )
        return EXIT_ZERO_ON_LOOP
    try:
        search = find_inscribed_squares(curve, field, grid=cfg.grid, tol=cfg.tol)
    except ContinuumSuspected as exc:
        warnings.append(f"continuum suspected: {exc}")
        write_report(
            _report("envelope", cfg, files, warnings=warnings),
            _out(cfg, "envelope_report.json"),
        )
        return EXIT_CONTINUUM

    deg = degree_consistency(search, anti)
    comps = trace_quadrant_components(curve, field, grid=cfg.grid, tol=cfg.tol)
    results = {
        "winding": anti.winding,
        "loop_min_norm": anti.min_norm,
        "loop_min_at": anti.at_param,
        "consistency": {
            "winding": deg.winding,
            "zeros_in_region_a": deg.zeros_in_a,
            "boundary_zeros": deg.boundary_zeros,
            "verdict": "PASS" if deg.consistent else "FAIL",
        },
        "spanning_components": sum(c.spanning for c in comps),
        "components": [
            {
                "size": c.size,
                "h_min": c.h_min,
                "h_max": c.h_max,
                "spanning": c.spanning,
            }
            for c in comps
        ],
    }
    write_report(
        _report("envelope", cfg, files, results, warnings),
        _out(cfg, "envelope_report.json"),
    )
    write_csv(
        _out(cfg, "envelope_components.csv"),
        ["index", "size", "h_min", "h_max", "spanning"],
        [[i, c.size, c.h_min, c.h_max, int(c.spanning)] for i, c in enumerate(comps)],
    )
    if svg:
        paths = []
        for i, c in enumerate(comps[:3]):
            paths.append((curve.points_at(c.points[:, 0]), f"component {i} side 1"))
            paths.append((curve.points_at(c.points[:, 1]), f"component {i} side 2"))
        fig_envelope(curve, paths, _out(cfg, "envelope.svg"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# spiral family


def cmd_spiral_check(path_file: str, relation_file: str, cfg: RunConfig,
                     svg: bool = False) -> int:
    """Relation avoidance scan over a sampled origin path."""
    path = load_origin_path(path_file)
    rel = load_relation(relation_file)
    chk = is_relation_avoiding(path, rel, tol=cfg.tol)
    t1, t2, idx = chk.witness
    results = {
        "avoiding": chk.avoiding,
        "min_gap": chk.min_gap,
        "witness": {"t1": t1, "t2": t2, "multiplier_index": idx},
        "samples": len(path.t),
        "multipliers": [complex(m) for m in rel.multipliers],
    }
    files = {"path": path_file, "relation": relation_file}
    write_report(
        _report("spiral check", cfg, files, results),
        _out(cfg, "spiral_check_report.json"),
    )
    write_csv(
        _out(cfg, "spiral_check.csv"),
        ["avoiding", "min_gap", "t1", "t2", "multiplier_index"],
        [[int(chk.avoiding), chk.min_gap, t1, t2, idx]],
    )
    if svg:
        pts = np.column_stack([path.z.real, path.z.imag])
        fig_plane_paths([(pts, "origin path")], _out(cfg, "spiral_check.svg"),
                        "relation check")
    return EXIT_OK


def cmd_spiral_splitpair(pair_file: str, cfg: RunConfig, iters: int = 10,
                         svg: bool = False) -> int:
    """Derivation trajectory of a split pair with a goodness log."""
    pair = load_split_pair(pair_file)
    run = derivation_trajectory(pair, max_steps=iters, stop_at_real=False)
    goods = [is_good(p) for p in run.pairs]
    results = {
        "steps": run.steps,
        "reason": run.reason,
        "all_good": all(goods),
        "trajectory": [
            {"step": k, "p": sp.p, "q": sp.q, "good": g}
            for k, (sp, g) in enumerate(zip(run.pairs, goods))
        ],
    }
    files = {"pair": pair_file}
    write_report(
        _report("spiral splitpair", cfg, files, results),
        _out(cfg, "spiral_splitpair_report.json"),
    )
    write_csv(
        _out(cfg, "spiral_splitpair.csv"),
        ["step", "p_re", "p_im", "q_re", "q_im", "good"],
        [
            [k, sp.p.real, sp.p.imag, sp.q.real, sp.q.imag, int(g)]
            for k, (sp, g) in enumerate(zip(run.pairs, goods))
        ],
    )
    if svg:
        p_pts = np.array([[sp.p.real, sp.p.imag] for sp in run.pairs])
        q_pts = np.array([[sp.q.real, sp.q.imag] for sp in run.pairs])
        fig_plane_paths(
            [(p_pts, "first element"), (q_pts, "second element")],
            _out(cfg, "spiral_splitpair.svg"),
            "split-pair derivation",
        )
    return EXIT_OK


def cmd_spiral_angle(offsets_file: str, cfg: RunConfig, svg: bool = False) -> int:
    """Common slope search for a family of lift offsets."""
    offsets = load_offsets(offsets_file)
    ang = find_spiral_angle(offsets)
    results = {
        "feasible": ang.feasible,
        "theta": ang.theta,
        "theta_low": ang.theta_low,
        "theta_high": ang.theta_high,
        "violating": list(ang.violating) if ang.violating is not None else None,
    }
    files = {"offsets": offsets_file}
    write_report(
        _report("spiral angle", cfg, files, results),
        _out(cfg, "spiral_angle_report.json"),
    )
    write_csv(
        _out(cfg, "spiral_angle.csv"),
        ["feasible", "theta", "theta_low", "theta_high"],
        [[int(ang.feasible), ang.theta, ang.theta_low, ang.theta_high]],
    )
    if svg:
        traces = []
        for w, k in offsets:
            lo, hi = w + k, w + k + 1
            traces.append((np.array([[0.0, 0.0], [lo.real, lo.imag]]), None))
            traces.append((np.array([[0.0, 0.0], [hi.real, hi.imag]]), None))
        fig_plane_paths(traces, _out(cfg, "spiral_angle.svg"), "offset rays")
    return EXIT_OK


def cmd_spiral_trochoid(instance_file: str | None, cfg: RunConfig,
                        sweep: int | None = None, svg: bool = False) -> int:
    """Solvability oracle for one instance, or a seeded monotonicity sweep."""
    if (instance_file is None) == (sweep is None):
        raise ValueError("give an instance file or --sweep N, not both or neither")

    if instance_file is not None:
        inst = load_trochoid_instance(instance_file)
        res = exists_solution(inst, cfg.t_max, grid=cfg.grid, tol=cfg.tol)
        res1 = exists_solution(with_lambda(inst, 1.0), cfg.t_max, grid=cfg.grid,
                               tol=cfg.tol)
        witness = (
            {"t1": res.witness[0], "t2": res.witness[1]} if res.witness else None
        )
        results = {
            "found": res.found,
            "witness": witness,
            "residual": res.residual,
            "floor": res.floor,
            "found_at_lambda_one": res1.found,
            "monotone_ok": (not res.found) or res1.found,
            "search": {"t_max": res.t_max, "grid": res.grid, "tol": res.tol},
        }
        files = {"instance": instance_file}
        write_report(
            _report("spiral trochoid", cfg, files, results),
            _out(cfg, "spiral_trochoid_report.json"),
        )
        write_csv(
            _out(cfg, "spiral_trochoid.csv"),
            ["found", "residual", "floor", "found_at_lambda_one"],
            [[int(res.found), res.residual, res.floor, int(res1.found)]],
        )
        if svg:
            t = np.linspace(0.0, cfg.t_max, 2048)
            lhs, rhs = lhs_value(inst, t), rhs_value(inst, t)
            fig_plane_paths(
                [
                    (np.column_stack([lhs.real, lhs.imag]), "left side"),
                    (np.column_stack([rhs.real, rhs.imag]), "right side"),
                ],
                _out(cfg, "spiral_trochoid.svg"),
                "two-sided traces",
            )
        return EXIT_OK

    rng = np.random.default_rng(cfg.seed)
    instances = [random_instance(rng) for _ in range(sweep)]

    def probe(inst):
        t_max = instance_period_window(inst)
        base = exists_solution(inst, t_max, grid=cfg.grid, tol=cfg.tol)
        full = (
            exists_solution(with_lambda(inst, 1.0), t_max, grid=cfg.grid, tol=cfg.tol)
            if base.found
            else None
        )
        return base, full

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        outcomes = list(pool.map(probe, instances))

    rows = []
    violations = []
    solvable = 0
    for i, (base, full) in enumerate(outcomes):
        ok = (not base.found) or full.found
        if base.found:
            solvable += 1
        if not ok:
            violations.append(i)
        rows.append(
            [i, int(base.found), base.residual if base.found else base.floor,
             int(full.found) if full is not None else "", int(ok)]
        )
    results = {
        "instances": sweep,
        "solvable": solvable,
        "pass_count": sweep - len(violations),
        "violations": violations,
        "verdict": "PASS" if not violations else "FAIL",
    }
    write_report(
        _report("spiral trochoid", cfg, {}, results),
        _out(cfg, "spiral_trochoid_report.json"),
    )
    write_csv(
        _out(cfg, "spiral_trochoid.csv"),
        ["index", "found", "residual_or_floor", "found_at_lambda_one", "monotone_ok"],
        rows,
    )
    return EXIT_OK


def cmd_spiral_area(area_file: str, cfg: RunConfig, svg: bool = False) -> int:
    """Swept-area comparison for a spiral segment pair."""
    x, a = load_area_spec(area_file)
    area1, area2 = swept_area_pair(x, a, cfg.t_max)
    scale = max(area1, area2)
    results = {
        "area_first": area1,
        "area_second": area2,
        "relative_gap": abs(area1 - area2) / scale if scale > 0 else 0.0,
        "t_max": cfg.t_max,
    }
    files = {"area_spec": area_file}
    write_report(
        _report("spiral area", cfg, files, results),
        _out(cfg, "spiral_area_report.json"),
    )
    write_csv(
        _out(cfg, "spiral_area.csv"),
        ["area_first", "area_second", "relative_gap"],
        [[area1, area2, results["relative_gap"]]],
    )
    if svg:
        f1 = spiral_path(x[0], a, cfg.t_max).z
        f2 = spiral_path(x[1], a, cfg.t_max).z
        d = 1j * (f2 - f1)
        traces = [
            (np.column_stack([z.real, z.imag]), label)
            for z, label in [
                (f1, "endpoint 1"),
                (f2, "endpoint 2"),
                (f1 + d, "corner 1"),
                (f2 + d, "corner 2"),
            ]
        ]
        fig_plane_paths(traces, _out(cfg, "spiral_area.svg"), "swept strips")
    return EXIT_OK


# ---------------------------------------------------------------------------
# curve generation


def cmd_gen_curve(cfg: RunConfig, kind: str = "random", svg: bool = False) -> int:
    """Write a curve fixture (JSON + CSV) for later runs."""
    if kind == "ellipse":
        curve = ellipse_curve(2.0, 1.0, n_samples=cfg.samples)
        stem = "curve_ellipse"
    elif kind == "circle":
        curve = circle_curve(1.0, n_samples=cfg.samples)
        stem = "curve_circle"
    else:
        curve = random_generic_curve(cfg.seed, n_samples=cfg.samples)
        stem = f"curve_random_{cfg.seed}"
    json_path = _out(cfg, f"{stem}.json")
    save_curve(curve, json_path)
    with open(_out(cfg, f"{stem}.csv"), "w", newline="\n") as fh:
        fh.write(curve_to_csv(curve))
    results = {
        "kind": kind,
        "seed": cfg.seed,
        "samples": curve.n,
        "path": json_path,
        "sha256": sha256_of(json_path),
    }
    write_report(
        _report("gen-curve", cfg, {}, results),
        _out(cfg, "gen_curve_report.json"),
    )
    if svg:
        fig_curve(curve, _out(cfg, f"{stem}.svg"), title=stem)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=512,
                        help="torus / residual grid resolution (default 512)")
    common.add_argument("--tol", type=float, default=1e-8,
                        help="numeric tolerance (default 1e-8)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for generated inputs (default 0)")
    common.add_argument("--t-max", type=float, default=40.0, dest="t_max",
                        help="time horizon for path sampling (default 40)")
    common.add_argument("--samples", type=int, default=4096,
                        help="1-d sample count (default 4096)")
    common.add_argument("--svg", action="store_true",
                        help="also render SVG figures")
    common.add_argument("--out", default=".",
                        help="output directory (default current)")

    parser = argparse.ArgumentParser(
        prog="squarescope",
        description="curve, square, envelope, and spiral-path reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("squares", parents=[common],
                       help="inscribed-square census with parity verdicts")
    p.add_argument("curve_file")

    p = sub.add_parser("envelope", parents=[common],
                       help="anti-diagonal winding and quadrant components")
    p.add_argument("curve_file")

    spiral = sub.add_parser("spiral", help="origin-path and trochoid checks")
    ssub = spiral.add_subparsers(dest="spiral_command", required=True)

    p = ssub.add_parser("check", parents=[common], help="relation avoidance scan")
    p.add_argument("path_file")
    p.add_argument("relation_file")

    p = ssub.add_parser("splitpair", parents=[common],
                        help="split-pair derivation trajectory")
    p.add_argument("pair_file")
    p.add_argument("--iters", type=int, default=10,
                   help="derivation steps to log (default 10)")

    p = ssub.add_parser("angle", parents=[common], help="common slope search")
    p.add_argument("offsets_file")

    p = ssub.add_parser("trochoid", parents=[common],
                        help="solvability oracle / monotonicity sweep")
    p.add_argument("instance_file", nargs="?")
    p.add_argument("--sweep", type=int,
                   help="run a seeded sweep of N random instances")

    p = ssub.add_parser("area", parents=[common], help="swept-area comparison")
    p.add_argument("area_file")

    p = sub.add_parser("gen-curve", parents=[common], help="write a curve fixture")
    p.add_argument("--kind", choices=["random", "ellipse", "circle"],
                   default="random")
    return parser


def _dispatch(args) -> int:
    cfg = RunConfig(args.grid, args.tol, args.seed, args.t_max, args.samples,
                    args.out)
    if args.command == "squares":
        return cmd_squares(args.curve_file, cfg, svg=args.svg)
    if args.command == "envelope":
        return cmd_envelope(args.curve_file, cfg, svg=args.svg)
    if args.command == "gen-curve":
        return cmd_gen_curve(cfg, kind=args.kind, svg=args.svg)
    if args.spiral_command == "check":
        return cmd_spiral_check(args.path_file, args.relation_file, cfg,
                                svg=args.svg)
    if args.spiral_command == "splitpair":
        return cmd_spiral_splitpair(args.pair_file, cfg, iters=args.iters,
                                    svg=args.svg)
    if args.spiral_command == "angle":
        return cmd_spiral_angle(args.offsets_file, cfg, svg=args.svg)
    if args.spiral_command == "trochoid":
        return cmd_spiral_trochoid(args.instance_file, cfg, sweep=args.sweep,
                                   svg=args.svg)
    if args.spiral_command == "area":
        return cmd_spiral_area(args.area_file, cfg, svg=args.svg)
    raise ValueError(f"unknown command {args.command}")


def main(argv=None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (SquarescopeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
