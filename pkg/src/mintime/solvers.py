"""Solution algorithms: fast sweeping, upwind-pruned sweeping, the active-list
fast iterative method, and a plain Jacobi fixed-point reference."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import engine
from .grid import Grid2D
from .local_update import EPS_SPEED, SENTINEL, _dir_allowed, sl_update, triangle_weights
from .problems import Control, ProblemSpec

__all__ = [
    "ValueField",
    "SolverStats",
    "SweepOrdering",
    "SWEEP_CYCLE",
    "NEIGHBORS8",
    "MAX_SWEEPS",
    "NonConvergenceError",
    "init_field",
    "allowed_in_sweep",
    "gauss_seidel_sweep",
    "solve_fsm",
    "solve_ufsm",
    "solve_fim",
    "solve_reference",
    "diff_fields",
]


class NonConvergenceError(RuntimeError):
    """A solver tripped its non-convergence guard."""


class SweepOrdering(NamedTuple):
    """One sweep direction pair: sx = +1 is W->E columns, sy = +1 is S->N rows."""

    sx: int
    sy: int


# Fixed cycle of the four sweep orderings.
SWEEP_CYCLE = (
    SweepOrdering(1, 1),
    SweepOrdering(1, -1),
    SweepOrdering(-1, -1),
    SweepOrdering(-1, 1),
)

# 8-neighborhood in fixed deterministic order; the compiled kernel mirrors it.
NEIGHBORS8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))

MAX_SWEEPS = 10_000
_MAX_REFERENCE_PASSES = 1_000_000


@dataclass
class ValueField:
    """Per-node time values and optimal-control indices on a grid.

    ``values[i, j]`` is the current approximation (SENTINEL where unknown,
    exactly 0 on targets); ``astar[i, j]`` the minimizing control index or -1.
    """

    grid: Grid2D
    values: np.ndarray
    astar: np.ndarray

    def copy(self) -> "ValueField":
        return ValueField(self.grid, self.values.copy(), self.astar.copy())


@dataclass
class SolverStats:
    """Work counters for one solver run.

    ``sweeps`` counts full grid passes including the final convergence-check
    pass (zero for the active-list method); ``insertions``/``imax`` track
    active-list entries per node (zero for sweeping methods).
    """

    sweeps: int = 0
    node_updates: int = 0
    insertions: np.ndarray | None = None
    imax: int = 0
    wall_seconds: float = 0.0


def init_field(grid: Grid2D) -> ValueField:
    """Fresh field: 0 on target nodes, sentinel elsewhere, no optimal controls."""
    values = np.full((grid.n, grid.n), SENTINEL, dtype=np.float64)
    astar = np.full((grid.n, grid.n), -1, dtype=np.int32)
    for ti, tj in grid.target_nodes:
        values[ti, tj] = 0.0
    return ValueField(grid, values, astar)


def target_mask(grid: Grid2D) -> np.ndarray:
    mask = np.zeros((grid.n, grid.n), dtype=np.uint8)
    for ti, tj in grid.target_nodes:
        mask[ti, tj] = 1
    return mask


def allowed_in_sweep(ordering: SweepOrdering, fraction: str, control: Control) -> bool:
    """Whether a control participates in the minimum search during this sweep."""
    return _dir_allowed(ordering[0], ordering[1], fraction, control.a[0], control.a[1])


def control_mask(spec: ProblemSpec, ordering: SweepOrdering, fraction: str) -> list[bool]:
    return [allowed_in_sweep(ordering, fraction, c) for c in spec.controls]


def gauss_seidel_sweep(
    grid: Grid2D,
    spec: ProblemSpec,
    field: ValueField,
    ordering: SweepOrdering,
    fraction: str = "full",
) -> tuple[float, int]:
    """One in-place grid pass in the given ordering; returns (max_change, updates).

    Rows (outer loop) run per sy, columns (inner loop) per sx; each non-target
    node takes the minimum of its old value and the sweep-filtered candidate,
    so values never increase.
    """
    n = grid.n
    vals = field.values
    ast = field.astar
    targets = grid.target_nodes
    use_velocity = spec.prune_on_velocity and fraction != "full"
    mask = None if use_velocity else control_mask(spec, ordering, fraction)
    vfilt = (ordering, fraction) if use_velocity else None

    max_change = 0.0
    updates = 0
    j_range = range(n) if ordering.sy > 0 else range(n - 1, -1, -1)
    i_range = range(n) if ordering.sx > 0 else range(n - 1, -1, -1)
    for j in j_range:
        for i in i_range:
            if (i, j) in targets:
                continue
            res = sl_update(grid, spec, field, (i, j), allowed=mask, velocity_filter=vfilt)
            updates += 1
            old = vals[i, j]
            if res.value < old:
                vals[i, j] = res.value
                ast[i, j] = res.astar
                change = old - res.value
                if change > max_change:
                    max_change = change
    return max_change, updates


def _solve_sweeping(grid, spec, fraction, eps, backend, monitor):
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    t0 = time.perf_counter()
    field = init_field(grid)
    runtime = engine.make_runtime(grid, spec, backend)
    stats = SolverStats()
    for sweep_no in range(1, MAX_SWEEPS + 1):
        ordering = SWEEP_CYCLE[(sweep_no - 1) % 4]
        if runtime is not None:
            change, updates = runtime.sweep(field, ordering, fraction)
        else:
            change, updates = gauss_seidel_sweep(grid, spec, field, ordering, fraction)
        stats.sweeps = sweep_no
        stats.node_updates += updates
        if monitor is not None:
            monitor(field)
        if change <= eps:
            break
    else:
        raise NonConvergenceError(f"no convergence within {MAX_SWEEPS} sweeps")
    stats.wall_seconds = time.perf_counter() - t0
    return field, stats


def solve_fsm(
    grid: Grid2D,
    spec: ProblemSpec,
    eps: float = 1e-12,
    backend: str = "auto",
    monitor: Callable[[ValueField], None] | None = None,
) -> tuple[ValueField, SolverStats]:
    """Fast sweeping: cycle the four orderings until a sweep changes nothing above eps.

    The reported sweep count includes that final quiet check sweep.
    """
    return _solve_sweeping(grid, spec, "full", eps, backend, monitor)


def solve_ufsm(
    grid: Grid2D,
    spec: ProblemSpec,
    fraction: str,
    eps: float = 1e-12,
    backend: str = "auto",
    monitor: Callable[[ValueField], None] | None = None,
) -> tuple[ValueField, SolverStats]:
    """Upwind fast sweeping: like solve_fsm but each sweep searches only the
    upwind 3/4 or 1/4 of the control set."""
    if fraction not in ("3/4", "1/4"):
        raise ValueError(f"fraction must be '3/4' or '1/4', got {fraction!r}")
    return _solve_sweeping(grid, spec, fraction, eps, backend, monitor)


def _initial_active(grid: Grid2D, active: np.ndarray, ins_count: np.ndarray):
    """Activate the 8-neighbors of all target nodes, in deterministic order."""
    n = grid.n
    current: list[tuple[int, int]] = []
    for ti, tj in grid.sorted_targets():
        for di, dj in NEIGHBORS8:
            ii, jj = ti + di, tj + dj
            if not (0 <= ii < n and 0 <= jj < n):
                continue
            if (ii, jj) in grid.target_nodes or active[ii, jj]:
                continue
            active[ii, jj] = 1
            ins_count[ii, jj] = 1
            current.append((ii, jj))
    return current


def _fim_pass_python(grid, spec, field, current, active, ins_count, eps):
    """One active-list pass over a snapshot of the list, in insertion order.

    Converged nodes leave the list and may (re)activate non-active non-target
    8-neighbors whose recomputed value improves by more than eps; activation
    assigns the improved value immediately.  Non-converged nodes stay listed.
    The next list is the stayers in snapshot order followed by the
    activations in event order, which preserves insertion chronology.
    """
    n = grid.n
    vals = field.values
    ast = field.astar
    targets = grid.target_nodes
    stay: list[tuple[int, int]] = []
    acts: list[tuple[int, int]] = []
    updates = 0
    for i, j in current:
        old = vals[i, j]
        res = sl_update(grid, spec, field, (i, j))
        updates += 1
        new = old
        if res.value < old:
            new = res.value
            vals[i, j] = new
            ast[i, j] = res.astar
        if old - new <= eps:
            active[i, j] = 0
            for di, dj in NEIGHBORS8:
                ii, jj = i + di, j + dj
                if not (0 <= ii < n and 0 <= jj < n):
                    continue
                if active[ii, jj] or (ii, jj) in targets:
                    continue
                q = sl_update(grid, spec, field, (ii, jj))
                updates += 1
                if q.value < vals[ii, jj] - eps:
                    vals[ii, jj] = q.value
                    ast[ii, jj] = q.astar
                    active[ii, jj] = 1
                    ins_count[ii, jj] += 1
                    acts.append((ii, jj))
        else:
            stay.append((i, j))
    return stay + acts, len(acts), updates


def solve_fim(
    grid: Grid2D,
    spec: ProblemSpec,
    eps: float = 1e-12,
    backend: str = "auto",
    monitor: Callable[[ValueField], None] | None = None,
    max_insertions: int | None = None,
) -> tuple[ValueField, SolverStats]:
    """Active-list fast iterative method; runs until the list is empty.

    Each node counts how many times it entered the list (initial activation
    included); the maximum of those counts measures how far the run is from
    single-pass behavior.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    t0 = time.perf_counter()
    field = init_field(grid)
    runtime = engine.make_runtime(grid, spec, backend)
    n = grid.n
    cap = max_insertions if max_insertions is not None else 1000 * grid.num_nodes
    active = np.zeros((n, n), dtype=np.uint8)
    ins_count = np.zeros((n, n), dtype=np.int32)
    current = _initial_active(grid, active, ins_count)
    total_insertions = len(current)
    stats = SolverStats()

    if runtime is not None:
        cap_nodes = grid.num_nodes
        cur_i = np.zeros(cap_nodes, dtype=np.int32)
        cur_j = np.zeros(cap_nodes, dtype=np.int32)
        nxt_i = np.zeros(cap_nodes, dtype=np.int32)
        nxt_j = np.zeros(cap_nodes, dtype=np.int32)
        act_i = np.zeros(cap_nodes, dtype=np.int32)
        act_j = np.zeros(cap_nodes, dtype=np.int32)
        n_cur = len(current)
        for idx, (ci, cj) in enumerate(current):
            cur_i[idx] = ci
            cur_j[idx] = cj
        while n_cur > 0:
            if total_insertions > cap:
                raise NonConvergenceError(
                    f"active-list insertions exceeded {cap} (grid of {grid.num_nodes} nodes)"
                )
            n_cur, n_act, updates = runtime.fim_pass(
                field, active, ins_count, cur_i, cur_j, n_cur, nxt_i, nxt_j, act_i, act_j, eps
            )
            cur_i, nxt_i = nxt_i, cur_i
            cur_j, nxt_j = nxt_j, cur_j
            total_insertions += n_act
            stats.node_updates += updates
            if monitor is not None:
                monitor(field)
    else:
        while current:
            if total_insertions > cap:
                raise NonConvergenceError(
                    f"active-list insertions exceeded {cap} (grid of {grid.num_nodes} nodes)"
                )
            current, n_act, updates = _fim_pass_python(
                grid, spec, field, current, active, ins_count, eps
            )
            total_insertions += n_act
            stats.node_updates += updates
            if monitor is not None:
                monitor(field)

    stats.insertions = ins_count
    stats.imax = int(ins_count.max())
    stats.wall_seconds = time.perf_counter() - t0
    return field, stats


def _reference_control_data(grid: Grid2D, spec: ProblemSpec):
    """Static per-control data for the vectorized Jacobi passes."""
    n = grid.n
    speed = engine.speed_table(spec, grid)
    data = []
    for ctrl in spec.controls:
        offsets, weights = triangle_weights(ctrl.a)
        used = [(offsets[v], weights[v]) for v in range(3) if weights[v] > 0.0]
        invalid = np.zeros((n, n), dtype=bool)
        for (oi, oj), _ in used:
            if oi > 0:
                invalid[n - 1, :] = True
            elif oi < 0:
                invalid[0, :] = True
            if oj > 0:
                invalid[:, n - 1] = True
            elif oj < 0:
                invalid[:, 0] = True
        tau = grid.dx / speed[:, :, ctrl.k]
        usable = speed[:, :, ctrl.k] > EPS_SPEED
        data.append((used, invalid, tau, usable))
    return data


def _reference_pass(vals, ast, targets_bool, control_data):
    """One Jacobi pass: all candidates from the previous iterate, min with old.

    Returns True when at least one node strictly improved.
    """
    n = vals.shape[0]
    old = vals.copy()
    padded = np.full((n + 2, n + 2), SENTINEL)
    padded[1:-1, 1:-1] = old
    best = np.full((n, n), np.inf)
    best_k = np.full((n, n), -1, dtype=np.int32)
    for k, (used, invalid, tau, usable) in enumerate(control_data):
        acc = np.zeros((n, n))
        all_sentinel = np.ones((n, n), dtype=bool)
        for (oi, oj), w in used:
            shifted = padded[1 + oi : 1 + oi + n, 1 + oj : 1 + oj + n]
            acc = acc + w * shifted
            all_sentinel &= shifted >= SENTINEL
        cand = acc + tau
        cand = np.where(all_sentinel, SENTINEL, cand)
        cand = np.where(invalid | ~usable, np.inf, cand)
        wins = cand < best
        best[wins] = cand[wins]
        best_k[wins] = k
    improved = (best < old) & ~targets_bool
    vals[improved] = best[improved]
    ast[improved] = best_k[improved]
    return bool(improved.any())


def solve_reference(
    grid: Grid2D,
    spec: ProblemSpec,
    initial: ValueField | None = None,
) -> ValueField:
    """Brute-force fixed-point oracle: full-grid Jacobi passes with the full
    control set, min with old, until a pass changes nothing at all.

    Independent of sweep orderings and list management.  ``initial`` resumes
    from an existing field (useful for idempotence checks).
    """
    field, _ = _reference_solve(grid, spec, initial)
    return field


def _reference_solve(grid, spec, initial=None):
    field = init_field(grid) if initial is None else initial.copy()
    targets_bool = target_mask(grid).astype(bool)
    if spec.aligned:
        control_data = _reference_control_data(grid, spec)
        passes = 0
        while True:
            passes += 1
            if passes > _MAX_REFERENCE_PASSES:
                raise NonConvergenceError(f"reference exceeded {_MAX_REFERENCE_PASSES} passes")
            if not _reference_pass(field.values, field.astar, targets_bool, control_data):
                break
        return field, passes
    # General dynamics: plain per-node Jacobi built on sl_update.
    n = grid.n
    passes = 0
    while True:
        passes += 1
        if passes > _MAX_REFERENCE_PASSES:
            raise NonConvergenceError(f"reference exceeded {_MAX_REFERENCE_PASSES} passes")
        frozen = field.copy()
        changed = False
        for i in range(n):
            for j in range(n):
                if (i, j) in grid.target_nodes:
                    continue
                res = sl_update(grid, spec, frozen, (i, j))
                if res.value < field.values[i, j]:
                    field.values[i, j] = res.value
                    field.astar[i, j] = res.astar
                    changed = True
        if not changed:
            break
    return field, passes


def diff_fields(a: ValueField, b: ValueField) -> tuple[float, float, tuple[int, int]]:
    """Max and mean absolute difference over informed nodes, and the argmax node.

    Nodes at the sentinel in both fields are excluded; a node informed in only
    one field contributes its (huge) difference, making divergence visible.
    """
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    mask = (a.values < SENTINEL) | (b.values < SENTINEL)
    if not mask.any():
        return (0.0, 0.0, (0, 0))
    diff = np.where(mask, np.abs(a.values - b.values), 0.0)
    flat = int(np.argmax(diff))
    i, j = divmod(flat, a.grid.n)
    linf = float(diff[i, j])
    l1_mean = float(diff[mask].mean())
    return (linf, l1_mean, (i, j))
