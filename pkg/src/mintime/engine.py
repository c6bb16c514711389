"""Backend selection and precomputed tables for the compiled kernels.

The compiled extension accelerates control-aligned problems by tabulating,
once per (grid, problem) pair, the per-control speeds, stencil offsets, and
barycentric weights; the kernels then replay exactly the arithmetic of the
pure-Python update, so both backends produce bit-identical fields.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grid import Grid2D, position
from .local_update import EPS_SPEED, SENTINEL, _dir_allowed, triangle_weights
from .problems import ProblemSpec

try:
    from . import _kernels
except ImportError:  # compiled extension not built; pure-Python fallback only
    _kernels = None

__all__ = ["BACKENDS", "have_compiled", "resolve_backend", "make_runtime", "speed_table"]

BACKENDS = ("auto", "cython", "python")


def have_compiled() -> bool:
    """Whether the compiled kernel extension is importable."""
    return _kernels is not None


def resolve_backend(backend: str, spec: ProblemSpec) -> str:
    """Map a requested backend name to the one that will actually run."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "cython":
        if not have_compiled():
            raise RuntimeError("compiled kernels are not available in this installation")
        if not spec.aligned:
            raise ValueError("compiled kernels require control-aligned dynamics")
        return "cython"
    if backend == "python":
        return "python"
    return "cython" if (have_compiled() and spec.aligned) else "python"


def speed_table(spec: ProblemSpec, grid: Grid2D) -> np.ndarray:
    """|f| per (node, control) as an (n, n, N_c) array.

    Evaluates the per-node coefficients with the same scalar code path as
    ProblemSpec.speed and broadcasts the anisotropy factor over the controls
    with identical operation order, so table entries equal the scalar speeds
    bit for bit.
    """
    if not spec.aligned:
        raise ValueError("speed tables exist only for control-aligned dynamics")
    n = grid.n
    coeffs = spec.coeffs
    gain = np.empty((n, n))
    p = np.empty((n, n))
    q = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            x, y = position(grid, i, j)
            gain[i, j], p[i, j], q[i, j] = coeffs(x, y)
    ax = np.array([c.a[0] for c in spec.controls])
    ay = np.array([c.a[1] for c in spec.controls])
    t = p[:, :, None] * ax + q[:, :, None] * ay
    m = 1.0 / np.sqrt(1.0 + t * t)
    return np.ascontiguousarray(gain[:, :, None] * m)


class CompiledRuntime:
    """Per-(grid, problem) state driving the compiled sweep and active-list kernels."""

    def __init__(self, grid: Grid2D, spec: ProblemSpec):
        if not spec.aligned:
            raise ValueError("compiled kernels require control-aligned dynamics")
        self.grid = grid
        self.spec = spec
        self.speed = speed_table(spec, grid)
        nc = len(spec.controls)
        self.off_i = np.empty((nc, 3), dtype=np.int8)
        self.off_j = np.empty((nc, 3), dtype=np.int8)
        self.weights = np.empty((nc, 3), dtype=np.float64)
        for k, ctrl in enumerate(spec.controls):
            offsets, weights = triangle_weights(ctrl.a)
            for v in range(3):
                self.off_i[k, v] = offsets[v][0]
                self.off_j[k, v] = offsets[v][1]
                self.weights[k, v] = weights[v]
        self.is_target = np.zeros((grid.n, grid.n), dtype=np.uint8)
        for ti, tj in grid.target_nodes:
            self.is_target[ti, tj] = 1
        self._full_idx = np.arange(nc, dtype=np.int32)
        self._allowed_idx: dict[tuple[int, int, str], np.ndarray] = {}

    def _allowed(self, ordering, fraction: str) -> np.ndarray:
        """Ascending indices of the controls kept in this sweep."""
        if fraction == "full":
            return self._full_idx
        key = (ordering[0], ordering[1], fraction)
        idx = self._allowed_idx.get(key)
        if idx is None:
            idx = np.array(
                [
                    c.k
                    for c in self.spec.controls
                    if _dir_allowed(ordering[0], ordering[1], fraction, c.a[0], c.a[1])
                ],
                dtype=np.int32,
            )
            self._allowed_idx[key] = idx
        return idx

    def sweep(self, field, ordering, fraction: str):
        return _kernels.sweep(
            field.values,
            field.astar,
            self.is_target,
            self.speed,
            self.off_i,
            self.off_j,
            self.weights,
            self._allowed(ordering, fraction),
            ordering[0],
            ordering[1],
            self.grid.dx,
            EPS_SPEED,
            SENTINEL,
        )

    def fim_pass(self, field, active, ins_count, cur_i, cur_j, n_cur, nxt_i, nxt_j, act_i, act_j, eps):
        return _kernels.fim_pass(
            field.values,
            field.astar,
            self.is_target,
            self.speed,
            self.off_i,
            self.off_j,
            self.weights,
            self._full_idx,
            cur_i,
            cur_j,
            n_cur,
            nxt_i,
            nxt_j,
            act_i,
            act_j,
            active,
            ins_count,
            self.grid.dx,
            eps,
            EPS_SPEED,
            SENTINEL,
        )


@lru_cache(maxsize=4)
def _cached_runtime(grid: Grid2D, spec: ProblemSpec) -> CompiledRuntime:
    # runtimes are immutable per (grid, spec); the speed table dominates their
    # footprint, so keep only a few
    return CompiledRuntime(grid, spec)


def make_runtime(grid: Grid2D, spec: ProblemSpec, backend: str = "auto"):
    """CompiledRuntime when the resolved backend is the extension, else None."""
    if resolve_backend(backend, spec) == "cython":
        return _cached_runtime(grid, spec)
    return None
