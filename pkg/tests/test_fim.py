from __future__ import annotations

import numpy as np
import pytest

from mintime import (
    NonConvergenceError,
    build_grid,
    builtin,
    diff_fields,
    solve_fim,
    solve_fsm,
)


def small_grid(spec, n):
    return build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, n, spec.target_points)


def test_smallest_instance():
    spec = builtin("hjb1")
    grid = small_grid(spec, 3)
    field, stats = solve_fim(grid, spec)
    assert field.values[1, 1] == 0.0
    # axis neighbors of the center target sit one spacing away at unit speed
    assert field.values[0, 1] == pytest.approx(grid.dx)
    assert field.values[2, 1] == pytest.approx(grid.dx)
    assert field.values[1, 0] == pytest.approx(grid.dx)
    assert stats.imax >= 1


def test_agrees_with_fsm_on_all_builtins():
    for pid in ("hjb1", "hjb2", "hjb3", "hjb4", "hjb5"):
        spec = builtin(pid)
        grid = small_grid(spec, 21)
        fim_field, _ = solve_fim(grid, spec)
        fsm_field, _ = solve_fsm(grid, spec)
        linf, _, _ = diff_fields(fim_field, fsm_field)
        assert linf <= 1e-9, pid


def test_insertion_bookkeeping():
    spec = builtin("hjb2")
    grid = small_grid(spec, 31)
    field, stats = solve_fim(grid, spec)
    ins = stats.insertions
    assert ins is not None
    assert stats.imax == ins.max()
    # every non-target informed node entered the list at least once
    informed = field.values < 1e29
    for t in grid.target_nodes:
        informed[t] = False
    assert (ins[informed] >= 1).all()
    for t in grid.target_nodes:
        assert ins[t] == 0


def test_monotone_nonincreasing_per_pass():
    spec = builtin("hjb4")
    grid = small_grid(spec, 15)
    prev = [None]

    def monitor(field):
        if prev[0] is not None:
            assert (field.values <= prev[0] + 1e-15).all()
        prev[0] = field.values.copy()

    solve_fim(grid, spec, monitor=monitor)


def test_single_pass_behavior_on_isotropic_problem():
    spec = builtin("hjb1")
    grid = small_grid(spec, 41)
    _, stats = solve_fim(grid, spec)
    assert stats.imax == 1


def test_insertion_guard_trips():
    spec = builtin("hjb1")
    grid = small_grid(spec, 21)
    with pytest.raises(NonConvergenceError):
        solve_fim(grid, spec, max_insertions=4)


def test_stats_fields():
    spec = builtin("hjb3")
    grid = small_grid(spec, 15)
    _, stats = solve_fim(grid, spec)
    assert stats.sweeps == 0
    assert stats.node_updates > 0
    assert stats.wall_seconds >= 0.0
