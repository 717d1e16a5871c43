"""Command-line harness: solve, sample, slice, bench, export.

All machine-readable output is JSON or CSV on standard output (or --out);
optional --fig flags render matplotlib figures to files alongside the
delimited output.  Exit codes: 0 success with at least one solution or a
family, 1 invalid input, 2 empty solution set, 64 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import multiprocessing
import sys
import time

import numpy as np

from .core_types import (
    CscPath,
    GoalPose,
    InvalidGoal,
    SolutionKind,
    SolutionSet,
    Tolerances,
)
from .kinematics import fk_residual, path_length
from .oracle import fk_geometric
from .solver import solve
from .special_cases import detect, CaseTag
from .kinematics import scale_goal

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_EMPTY = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def _solution_set_json(goal: GoalPose, result: SolutionSet) -> dict:
    sols = []
    for p in result.paths:
        sols.append(
            {
                "phi1": p.phi1,
                "psi1": p.psi1,
                "d": p.d,
                "phi2": p.phi2,
                "psi2": p.psi2,
                "length": path_length(p, goal.r),
                "fk_residual": fk_residual(p, goal),
            }
        )
    doc = {
        "goal": {"x": goal.x_g.tolist(), "v": goal.v_g.tolist(), "r": goal.r},
        "kind": result.kind.value,
        "solutions": sols,
        "diagnostics": _jsonable(result.diagnostics),
        "wall_ms": result.wall_ms,
    }
    if result.family is not None:
        doc["family"] = {"theta4_choices": list(result.family.theta4_choices)}
    return doc


def _write_out(text: str, out_path):
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _goal_from_args(args) -> GoalPose:
    if getattr(args, "json_in", None):
        with open(args.json_in) as f:
            doc = json.load(f)
        return GoalPose(np.array(doc["x"], float), np.array(doc["v"], float), float(doc.get("r", 1.0)))
    if args.x is None or args.v is None:
        raise InvalidGoal("missing --x/--v (or --json-in)")
    return GoalPose(np.array(args.x, float), np.array(args.v, float), args.r)


def _tol_from_args(args) -> Tolerances:
    if getattr(args, "tol_fk", None):
        return Tolerances(fk_residual=args.tol_fk)
    return Tolerances()


def _add_goal_flags(p):
    p.add_argument("--x", type=float, nargs=3, help="goal position (3 floats)")
    p.add_argument("--v", type=float, nargs=3, help="goal direction (3 floats)")
    p.add_argument("--r", type=float, default=1.0, help="turning radius (default 1)")
    p.add_argument("--tol-fk", type=float, default=None, help="override fk residual tolerance")
    p.add_argument("--json-in", type=str, default=None, help="read goal from JSON file {x, v, r}")
    p.add_argument("--out", type=str, default=None, help="write output to file instead of stdout")


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    try:
        goal = _goal_from_args(args)
        if float(np.linalg.norm(goal.x_g)) < 1e-12:
            raise InvalidGoal("degenerate zero goal at start")
        result = solve(goal, _tol_from_args(args))
    except (InvalidGoal, OSError, ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    doc = _solution_set_json(goal, result)
    _write_out(json.dumps(doc, indent=2) + "\n", args.out)
    if result.paths or result.family is not None:
        return EXIT_OK
    return EXIT_EMPTY


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def sample_goal(seed: int, index: int, cube: float, r: float) -> GoalPose:
    """Deterministic per-index goal: uniform position in the cube, uniform
    direction via normalized Gaussians.  Independent of threading."""
    rng = np.random.default_rng((seed, index))
    x = rng.uniform(-cube, cube, 3)
    v = rng.normal(size=3)
    while np.linalg.norm(v) < 1e-12:
        v = rng.normal(size=3)
    return GoalPose(x, v, r)


def _sample_chunk(payload):
    seed, start, stop, cube, r = payload
    counts = {}
    total_ms = 0.0
    for i in range(start, stop):
        goal = sample_goal(seed, i, cube, r)
        t0 = time.perf_counter()
        result = solve(goal)
        total_ms += (time.perf_counter() - t0) * 1e3
        c = len(result.paths)
        counts[c] = counts.get(c, 0) + 1
    return counts, total_ms


def sample_counts(n: int, seed: int, cube: float = 4.0, r: float = 1.0, threads: int = 1):
    """Histogram of solution counts over n random goals.

    Work is partitioned by sample index with per-index RNG streams, so the
    histogram is identical for any thread count.  Returns (counts dict,
    mean wall ms per solve).
    """
    chunk = max(1, math.ceil(n / max(threads, 1) / 4))
    payloads = [
        (seed, s, min(s + chunk, n), cube, r) for s in range(0, n, chunk)
    ]
    counts = {}
    total_ms = 0.0
    if threads > 1:
        with multiprocessing.Pool(threads) as pool:
            parts = pool.map(_sample_chunk, payloads)
    else:
        parts = [_sample_chunk(p) for p in payloads]
    for c, ms in parts:
        total_ms += ms
        for k, v in c.items():
            counts[k] = counts.get(k, 0) + v
    return counts, total_ms / max(n, 1)


def cmd_sample(args) -> int:
    counts, mean_ms = sample_counts(args.n, args.seed, args.cube, args.r, args.threads)
    buf = io.StringIO()
    buf.write("solution_count,frequency,percent\n")
    for k in sorted(counts):
        buf.write(f"{k},{counts[k]},{100.0 * counts[k] / args.n:.6f}\n")
    _write_out(buf.getvalue(), args.out)
    summary = {
        "n": args.n,
        "seed": args.seed,
        "min_count": min(counts) if counts else None,
        "max_count": max(counts) if counts else None,
        "mean_wall_ms": mean_ms,
    }
    if args.summary_out:
        with open(args.summary_out, "w") as f:
            json.dump(summary, f, indent=2)
    else:
        print(json.dumps(summary), file=sys.stderr)
    if args.fig:
        _render_histogram(counts, args.n, args.fig)
    return EXIT_OK


# ---------------------------------------------------------------------------
# slice
# ---------------------------------------------------------------------------

_SLICE_PRESETS = {
    # (y of x_g, v_g): slice planes used in the reported experiments.
    "fig1a": (0.0, (0.0, 1.0, 0.0)),
    "fig1b": (0.5, (0.5, 1.0, 0.0)),
}


def cmd_slice(args) -> int:
    if args.preset:
        y, v = _SLICE_PRESETS[args.preset]
    else:
        if args.y is None or args.v is None:
            print("error: need --preset or both --y and --v", file=sys.stderr)
            return EXIT_USAGE
        y, v = args.y, tuple(args.v)
    xs = np.linspace(args.xmin, args.xmax, args.steps)
    zs = np.linspace(args.zmin, args.zmax, args.steps)
    buf = io.StringIO()
    buf.write("# columns: x,z,n_solutions,shortest_length\n")
    buf.write("# scan order: row-major, x outer loop, z inner loop\n")
    buf.write("# n_solutions = -1 marks an infinite-family goal\n")
    grid_n = np.zeros((args.steps, args.steps))
    grid_len = np.full((args.steps, args.steps), np.inf)
    for i, xv in enumerate(xs):
        for j, zv in enumerate(zs):
            try:
                goal = GoalPose(np.array([xv, y, zv]), np.array(v, float), args.r)
                result = solve(goal)
            except InvalidGoal:
                buf.write(f"{xv:.6g},{zv:.6g},0,inf\n")
                continue
            if result.kind is SolutionKind.INFINITE_FAMILY:
                nsol = -1
            else:
                nsol = len(result.paths)
            if result.paths:
                slen = min(path_length(p, args.r) for p in result.paths)
                grid_len[i, j] = slen
                buf.write(f"{xv:.6g},{zv:.6g},{nsol},{slen:.9g}\n")
            else:
                buf.write(f"{xv:.6g},{zv:.6g},{nsol},inf\n")
            grid_n[i, j] = nsol
    _write_out(buf.getvalue(), args.out)
    if args.fig:
        _render_slice(xs, zs, grid_n, grid_len, args.fig)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(args) -> int:
    rng_index = 0
    times = []
    while len(times) < args.n:
        goal = sample_goal(args.seed, rng_index, 4.0, 1.0)
        rng_index += 1
        if detect(scale_goal(goal)) is not CaseTag.GENERAL:
            continue
        t0 = time.perf_counter()
        solve(goal)
        times.append((time.perf_counter() - t0) * 1e3)
    times_arr = np.array(times)
    doc = {
        "n": args.n,
        "seed": args.seed,
        "median_ms": float(np.median(times_arr)),
        "mean_ms": float(np.mean(times_arr)),
        "p95_ms": float(np.percentile(times_arr, 95)),
    }
    _write_out(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def cmd_export(args) -> int:
    if args.samples_per_path < 2:
        print("error: --samples-per-path must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        goal = _goal_from_args(args)
        if float(np.linalg.norm(goal.x_g)) < 1e-12:
            raise InvalidGoal("degenerate zero goal at start")
        result = solve(goal, _tol_from_args(args))
    except (InvalidGoal, OSError, ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    buf = io.StringIO()
    buf.write("solution_index,t,x,y,z\n")
    polylines = []
    for si, p in enumerate(result.paths):
        pts = fk_geometric(p, goal.r, args.samples_per_path)
        polylines.append(pts)
        m = len(pts)
        for k, pt in enumerate(pts):
            t = k / (m - 1) if m > 1 else 0.0
            buf.write(f"{si},{t:.9g},{pt[0]:.9g},{pt[1]:.9g},{pt[2]:.9g}\n")
    _write_out(buf.getvalue(), args.out)
    if args.fig:
        _render_paths(polylines, goal, args.fig)
    if result.paths or result.family is not None:
        return EXIT_OK
    return EXIT_EMPTY


# ---------------------------------------------------------------------------
# figures (optional; matplotlib imported lazily)
# ---------------------------------------------------------------------------

def _mpl():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _render_histogram(counts, n, path):
    plt = _mpl()
    ks = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(ks, [100.0 * counts[k] / n for k in ks])
    ax.set_xlabel("number of solutions")
    ax.set_ylabel("percent of goals")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_slice(xs, zs, grid_n, grid_len, path):
    plt = _mpl()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    im1 = ax1.pcolormesh(xs, zs, grid_n.T, shading="auto")
    ax1.set_title("solution count")
    ax1.set_xlabel("x")
    ax1.set_ylabel("z")
    fig.colorbar(im1, ax=ax1)
    finite = np.where(np.isfinite(grid_len), grid_len, np.nan)
    im2 = ax2.pcolormesh(xs, zs, finite.T, shading="auto")
    ax2.set_title("shortest path length")
    ax2.set_xlabel("x")
    ax2.set_ylabel("z")
    fig.colorbar(im2, ax=ax2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_paths(polylines, goal, path):
    plt = _mpl()
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    for pts in polylines:
        arr = np.array(pts)
        ax.plot(arr[:, 0], arr[:, 1], arr[:, 2])
    ax.scatter(*goal.x_g, color="k", marker="*", s=60)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csc3d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one goal, emit JSON")
    _add_goal_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sample", help="solution-count histogram over random goals")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cube", type=float, default=4.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--summary-out", type=str, default=None)
    p.add_argument("--fig", type=str, default=None, help="render histogram PNG")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("slice", help="2D slice of the goal space, emit CSV grid")
    p.add_argument("--preset", choices=sorted(_SLICE_PRESETS), default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--v", type=float, nargs=3, default=None)
    p.add_argument("--xmin", type=float, default=-4.0)
    p.add_argument("--xmax", type=float, default=4.0)
    p.add_argument("--zmin", type=float, default=-4.0)
    p.add_argument("--zmax", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--fig", type=str, default=None, help="render heatmap PNG")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("bench", help="timing summary over random general goals")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="sampled polylines of all solutions, CSV")
    _add_goal_flags(p)
    p.add_argument("--samples-per-path", type=int, default=64)
    p.add_argument("--fig", type=str, default=None, help="render 3D paths PNG")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
