"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same solves on both backends, checks the fields are bit-identical,
and reports wall times and speedups.

    python benchmarks/bench_backends.py [--n 61] [--problems hjb1,hjb4] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import mintime as mt


def run_once(spec, grid, method, backend):
    t0 = time.perf_counter()
    if method == "fsm":
        field, _ = mt.solve_fsm(grid, spec, backend=backend)
    elif method == "ufsm34":
        field, _ = mt.solve_ufsm(grid, spec, "3/4", backend=backend)
    else:
        field, _ = mt.solve_fim(grid, spec, backend=backend)
    return field, time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=61, help="nodes per side (default 61)")
    parser.add_argument("--problems", default="hjb1,hjb4", help="comma-separated problem ids")
    parser.add_argument("--methods", default="fsm,ufsm34,fim", help="comma-separated methods")
    parser.add_argument("--repeats", type=int, default=3, help="repeats per measurement (min taken)")
    args = parser.parse_args()

    if not mt.have_compiled():
        print("compiled kernels are not available; nothing to compare")
        return 1

    print(f"{'problem':8s} {'method':8s} {'n':>5s} {'python':>10s} {'cython':>10s} {'speedup':>8s}  identical")
    for pid in args.problems.split(","):
        spec = mt.builtin(pid)
        grid = mt.build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, args.n, spec.target_points)
        for method in args.methods.split(","):
            t_py = min(run_once(spec, grid, method, "python")[1] for _ in range(args.repeats))
            t_cy = min(run_once(spec, grid, method, "cython")[1] for _ in range(args.repeats))
            f_py, _ = run_once(spec, grid, method, "python")
            f_cy, _ = run_once(spec, grid, method, "cython")
            same = np.array_equal(f_py.values, f_cy.values) and np.array_equal(f_py.astar, f_cy.astar)
            print(
                f"{pid:8s} {method:8s} {args.n:5d} {t_py:9.3f}s {t_cy:9.3f}s {t_py / t_cy:7.1f}x  {same}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
