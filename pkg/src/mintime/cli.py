"""Command-line front end: solve one problem, compare methods, or build the
benchmark table.

Exit codes: 0 success, 1 usage/configuration error, 2 solver guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .engine import BACKENDS
from .grid import build_grid
from .problems import BUILTIN_IDS, builtin, load_problem_file
from .solvers import (
    NonConvergenceError,
    diff_fields,
    solve_fim,
    solve_fsm,
    solve_reference,
    solve_ufsm,
    _reference_solve,
)

METHODS = ("fsm", "ufsm34", "ufsm14", "fim", "reference")
_TABLE_METHODS = ("fsm", "fim", "ufsm14", "ufsm34")


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse defaults to 2, which is reserved for
    # tripped solver guards here)
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_problem_args(p: _Parser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--problem", choices=BUILTIN_IDS, help="built-in problem id")
    group.add_argument("--spec-file", type=Path, help="custom problem parameter file")
    p.add_argument("--n", type=int, default=101, help="nodes per side (default 101)")
    p.add_argument("--eps", type=float, default=1e-12, help="convergence threshold (default 1e-12)")
    p.add_argument("--backend", choices=BACKENDS, default="auto", help="kernel backend")


def _load(args):
    spec = builtin(args.problem) if args.problem else load_problem_file(args.spec_file)
    grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, args.n, spec.target_points)
    return spec, grid


def _run(method, grid, spec, eps, backend):
    """Run one method; returns (field, info_dict, stats_or_None)."""
    if method == "reference":
        t0 = time.perf_counter()
        field, passes = _reference_solve(grid, spec)
        wall = time.perf_counter() - t0
        info = {
            "sweeps": passes,
            "node_updates": passes * (grid.num_nodes - len(grid.target_nodes)),
            "imax": 0,
            "wall_seconds": wall,
        }
        return field, info, None
    if method == "fsm":
        field, stats = solve_fsm(grid, spec, eps=eps, backend=backend)
    elif method == "ufsm34":
        field, stats = solve_ufsm(grid, spec, "3/4", eps=eps, backend=backend)
    elif method == "ufsm14":
        field, stats = solve_ufsm(grid, spec, "1/4", eps=eps, backend=backend)
    elif method == "fim":
        field, stats = solve_fim(grid, spec, eps=eps, backend=backend)
    else:
        raise ValueError(f"unknown method {method!r}")
    info = {
        "sweeps": stats.sweeps,
        "node_updates": stats.node_updates,
        "imax": stats.imax,
        "wall_seconds": stats.wall_seconds,
    }
    return field, info, stats


def cmd_solve(args) -> int:
    spec, grid = _load(args)
    if args.reactivation is not None and args.method != "fim":
        raise ValueError("--reactivation requires --method fim")
    field, info, stats = _run(args.method, grid, spec, args.eps, args.backend)
    payload = {
        "problem": spec.pid,
        "method": args.method,
        "n": grid.n,
        "dx": grid.dx,
        "eps": args.eps,
        **info,
    }
    io.write_solution_csv(args.out, grid, field, include_astar=not args.no_astar)
    io.write_stats_json(args.stats, payload)
    if args.reactivation is not None:
        io.write_reactivation_csv(args.reactivation, stats.insertions)
    print(
        f"{spec.pid} {args.method} n={grid.n}: sweeps={payload['sweeps']} "
        f"imax={payload['imax']} wall={payload['wall_seconds']:.3f}s -> {args.out}"
    )
    return 0


def cmd_compare(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if len(methods) < 2:
        raise ValueError("--methods needs at least two comma-separated methods")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    spec, grid = _load(args)
    reference = solve_reference(grid, spec)
    fields = {}
    for m in dict.fromkeys(methods):
        fields[m] = reference if m == "reference" else _run(m, grid, spec, args.eps, args.backend)[0]

    per_method = {}
    for m in dict.fromkeys(methods):
        linf, l1, argmax = diff_fields(fields[m], reference)
        per_method[m] = {
            "linf": linf,
            "l1_mean": l1,
            "argmax": list(argmax),
            "divergent": linf > args.tolerance,
        }
    pairwise = []
    for a_idx, ma in enumerate(methods):
        for mb in methods[a_idx + 1 :]:
            linf, _, _ = diff_fields(fields[ma], fields[mb])
            pairwise.append({"a": ma, "b": mb, "linf": linf})

    print(f"{spec.pid} n={grid.n}: L-infinity distance to reference (tolerance {args.tolerance:g})")
    for m, entry in per_method.items():
        flag = "  DIVERGENT" if entry["divergent"] else ""
        print(f"  {m:10s} linf={entry['linf']:.3e}  l1={entry['l1_mean']:.3e}{flag}")
    payload = {
        "problem": spec.pid,
        "n": grid.n,
        "eps": args.eps,
        "tolerance": args.tolerance,
        "vs_reference": per_method,
        "pairwise": pairwise,
    }
    io.write_stats_json(args.out, payload)
    return 0


def cmd_table(args) -> int:
    problems = (
        [p.strip() for p in args.problems.split(",") if p.strip()] if args.problems else list(BUILTIN_IDS)
    )
    for p in problems:
        if p not in BUILTIN_IDS:
            raise ValueError(f"unknown problem {p!r}; expected one of {BUILTIN_IDS}")
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = []
    for pid in problems:
        spec = builtin(pid)
        for n in sizes:
            grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, n, spec.target_points)
            row = {"problem": pid, "n": n, "dx": grid.dx}
            for method in _TABLE_METHODS:
                _, info, _ = _run(method, grid, spec, args.eps, args.backend)
                row[f"{method}_seconds"] = info["wall_seconds"]
                if method == "fim":
                    row["fim_imax"] = info["imax"]
                else:
                    row[f"{method}_sweeps"] = info["sweeps"]
            rows.append(row)

    text = _format_table(rows)
    print(text)
    header = [
        "problem", "n", "dx",
        "fsm_seconds", "fsm_sweeps",
        "fim_seconds", "fim_imax",
        "ufsm14_seconds", "ufsm14_sweeps",
        "ufsm34_seconds", "ufsm34_sweeps",
    ]
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row["problem"],
                    str(row["n"]),
                    f"{row['dx']:.17g}",
                    f"{row['fsm_seconds']:.4f}",
                    str(row["fsm_sweeps"]),
                    f"{row['fim_seconds']:.4f}",
                    str(row["fim_imax"]),
                    f"{row['ufsm14_seconds']:.4f}",
                    str(row["ufsm14_sweeps"]),
                    f"{row['ufsm34_seconds']:.4f}",
                    str(row["ufsm34_sweeps"]),
                ]
            )
        )
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.text:
        Path(args.text).write_text(text + "\n", encoding="utf-8")
    return 0


def _format_table(rows) -> str:
    out = [
        f"{'problem':8s} {'n':>4s} {'dx':>8s}  {'fsm':>14s}  {'fim':>12s}  {'ufsm14':>14s}  {'ufsm34':>14s}"
    ]
    for row in rows:
        fsm = f"{row['fsm_seconds']:.2f}s ({row['fsm_sweeps']})"
        fim = f"{row['fim_seconds']:.2f}s [{row['fim_imax']}]"
        u14 = f"{row['ufsm14_seconds']:.2f}s ({row['ufsm14_sweeps']})"
        u34 = f"{row['ufsm34_seconds']:.2f}s ({row['ufsm34_sweeps']})"
        out.append(
            f"{row['problem']:8s} {row['n']:4d} {row['dx']:8.4g}  {fsm:>14s}  {fim:>12s}  {u14:>14s}  {u34:>14s}"
        )
    return "\n".join(out)


def build_parser() -> _Parser:
    parser = _Parser(prog="mintime", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p_solve = sub.add_parser("solve", help="solve one problem with one method", parents=[])
    _add_problem_args(p_solve)
    p_solve.add_argument("--method", choices=METHODS, required=True)
    p_solve.add_argument("--out", type=Path, default=Path("solution.csv"), help="solution CSV path")
    p_solve.add_argument("--stats", type=Path, default=Path("stats.json"), help="stats JSON path")
    p_solve.add_argument(
        "--reactivation", type=Path, default=None,
        help="write the per-node active-list insertion map (fim only)",
    )
    p_solve.add_argument(
        "--no-astar", action="store_true",
        help="write -1 in the astar column instead of control indices",
    )
    p_solve.set_defaults(func=cmd_solve)

    p_cmp = sub.add_parser("compare", help="diff several methods against the reference")
    _add_problem_args(p_cmp)
    p_cmp.add_argument("--methods", required=True, help="comma-separated method list")
    p_cmp.add_argument("--tolerance", type=float, default=1e-9, help="agreement threshold")
    p_cmp.add_argument("--out", type=Path, default=Path("compare.json"), help="report JSON path")
    p_cmp.set_defaults(func=cmd_compare)

    p_tab = sub.add_parser("table", help="benchmark table over problems and grid sizes")
    p_tab.add_argument("--problems", default=None, help="comma-separated problem ids (default all)")
    p_tab.add_argument("--sizes", default="101,201,401", help="comma-separated grid sizes")
    p_tab.add_argument("--eps", type=float, default=1e-12)
    p_tab.add_argument("--backend", choices=BACKENDS, default="auto")
    p_tab.add_argument("--out", type=Path, default=Path("table.csv"), help="table CSV path")
    p_tab.add_argument("--text", type=Path, default=None, help="also write the aligned text table")
    p_tab.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        print(f"mintime: solver guard tripped: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"mintime: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
