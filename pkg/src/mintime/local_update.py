"""Semi-Lagrangian node update with a 3-point first-neighbor stencil.

The candidate value at a node is built by stepping distance dx along the
velocity direction of each discrete control, linearly interpolating the value
field on the triangle of first neighbors spanning that direction, and adding
the time of flight dx/|f|.  The node update is the minimum candidate over the
admissible controls.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

from .grid import Grid2D, position
from .problems import Control, ProblemSpec

__all__ = [
    "SENTINEL",
    "EPS_SPEED",
    "UpdateResult",
    "foot_point",
    "triangle_weights",
    "interpolate",
    "sl_update",
]

# Value assigned to not-yet-informed nodes.  Finite so candidate arithmetic
# stays well defined; large enough that any time-of-flight added to it is
# absorbed by rounding, keeping untouched regions bit-stable across sweeps.
SENTINEL = 1e30

# Below this velocity magnitude a control is unusable (excluded from the min).
EPS_SPEED = 1e-14

_UNIT_TOL = 1e-9


class UpdateResult(NamedTuple):
    """Outcome of one node update: best candidate and its minimizing control."""

    value: float
    astar: int
    foot: tuple[float, float] | None
    tau: float
    feasible: bool


def foot_point(dx: float, x_i: tuple[float, float], f: tuple[float, float]):
    """Point at distance dx from x_i along f, and the time of flight dx/|f|.

    One forward Euler step with the velocity frozen at the node: the
    trajectory is a straight ray stopped at distance dx.  Returns None when
    |f| <= EPS_SPEED (control unusable, not an error).
    """
    fx, fy = f
    nf = math.sqrt(fx * fx + fy * fy)
    if nf <= EPS_SPEED:
        return None
    tau = dx / nf
    return ((x_i[0] + dx * (fx / nf), x_i[1] + dx * (fy / nf)), tau)


def triangle_weights(direction: tuple[float, float]):
    """First-neighbor triangle and barycentric weights for a unit direction.

    With (u, v) = (|dx|, |dy|) and signs (sx, sy) the triangle vertices are
    the offsets (sx, 0), (sx, sy), (0, sy) and the weights (1-v, u+v-1, 1-u).
    Unit length forces u + v >= 1, so all weights lie in [0, 1]; exact zero
    components give a degenerate single-neighbor stencil (zero weights).
    Components equal to zero take sign +1.
    """
    dx_, dy_ = direction
    u = abs(dx_)
    v = abs(dy_)
    if abs(u * u + v * v - 1.0) > _UNIT_TOL:
        raise ValueError(f"direction must be a unit vector, got {direction!r}")
    sx = 1 if dx_ >= 0.0 else -1
    sy = 1 if dy_ >= 0.0 else -1
    w1 = min(max(1.0 - v, 0.0), 1.0)
    w2 = min(max(u + v - 1.0, 0.0), 1.0)
    w3 = min(max(1.0 - u, 0.0), 1.0)
    return ((sx, 0), (sx, sy), (0, sy)), (w1, w2, w3)


def _interp_at(vals, n: int, i: int, j: int, dir_x: float, dir_y: float):
    """Triangle interpolation of the field at the foot of (dir_x, dir_y) from node (i, j).

    Zero-weight vertices are ignored entirely.  Returns None when a
    positive-weight vertex falls outside the grid.  When every contributing
    vertex is still at the sentinel the result is the sentinel exactly.
    """
    offsets, weights = triangle_weights((dir_x, dir_y))
    acc = 0.0
    informative = False
    for v in range(3):
        w = weights[v]
        if w > 0.0:
            ii = i + offsets[v][0]
            jj = j + offsets[v][1]
            if not (0 <= ii < n and 0 <= jj < n):
                return None
            val = vals[ii, jj]
            if val < SENTINEL:
                informative = True
            acc = acc + w * val
    if not informative:
        return SENTINEL
    return acc


def interpolate(field, node: tuple[int, int], direction: tuple[float, float], grid: Grid2D):
    """Linear interpolation of the value field at the triangle spanned by `direction`.

    Returns the interpolated value, or None when the stencil leaves the grid
    (the control is then unusable).
    """
    vals = getattr(field, "values", field)
    i, j = node
    if not (0 <= i < grid.n and 0 <= j < grid.n):
        raise IndexError(f"node {node!r} out of range for n={grid.n}")
    return _interp_at(vals, grid.n, i, j, direction[0], direction[1])


def _dir_allowed(sx: int, sy: int, fraction: str, ax: float, ay: float) -> bool:
    """Sweep-direction control filter on a direction vector (ax, ay).

    full: keep everything.  3/4: drop the strictly downwind open quadrant
    (ax*sx > 0 and ay*sy > 0), axis directions kept.  1/4: keep only the
    closed upwind quadrant (ax*sx <= 0 and ay*sy <= 0).
    """
    if fraction == "full":
        return True
    if fraction == "3/4":
        return not (ax * sx > 0.0 and ay * sy > 0.0)
    if fraction == "1/4":
        return ax * sx <= 0.0 and ay * sy <= 0.0
    raise ValueError(f"unknown control fraction {fraction!r}")


def sl_update(
    grid: Grid2D,
    spec: ProblemSpec,
    field,
    node: tuple[int, int],
    allowed: Sequence[bool] | Callable[[Control], bool] | None = None,
    velocity_filter=None,
) -> UpdateResult:
    """Minimum candidate over the admissible controls at a non-target node.

    ``allowed`` restricts the control set, either as a per-index boolean mask
    or as a predicate on Control.  ``velocity_filter`` = (ordering, fraction)
    applies the sweep filter to the computed velocity direction instead of the
    control; it is honored only when ``spec.prune_on_velocity`` is set.
    Controls whose velocity is negligible or whose stencil leaves the grid are
    excluded; if none remains the result is infeasible with sentinel value.
    Ties in the minimum go to the lowest control index.
    """
    i, j = node
    if (i, j) in grid.target_nodes:
        raise ValueError(f"node {node!r} is a target node and is fixed at 0")
    vals = getattr(field, "values", field)
    n = grid.n
    dx = grid.dx
    x, y = position(grid, i, j)

    mask = None
    pred = None
    if allowed is not None:
        if callable(allowed):
            pred = allowed
        else:
            mask = allowed
    vfilt = None
    if velocity_filter is not None and spec.prune_on_velocity:
        ordering, fraction = velocity_filter
        vfilt = (ordering[0], ordering[1], fraction)

    aligned = spec.aligned
    best = math.inf
    best_k = -1
    best_dir = (0.0, 0.0)
    best_tau = 0.0
    feasible = False
    for ctrl in spec.controls:
        if mask is not None and not mask[ctrl.k]:
            continue
        if pred is not None and not pred(ctrl):
            continue
        if aligned:
            s = spec.speed(x, y, ctrl.a)
            if s <= EPS_SPEED:
                continue
            dir_x, dir_y = ctrl.a
            tau = dx / s
        else:
            fx, fy = spec.dynamics(x, y, ctrl.a)
            nf = math.sqrt(fx * fx + fy * fy)
            if nf <= EPS_SPEED:
                continue
            dir_x = fx / nf
            dir_y = fy / nf
            tau = dx / nf
        if vfilt is not None and not _dir_allowed(vfilt[0], vfilt[1], vfilt[2], dir_x, dir_y):
            continue
        interp = _interp_at(vals, n, i, j, dir_x, dir_y)
        if interp is None:
            continue
        feasible = True
        cand = interp + tau
        if cand < best:
            best = cand
            best_k = ctrl.k
            best_dir = (dir_x, dir_y)
            best_tau = tau
    if best_k < 0:
        return UpdateResult(SENTINEL, -1, None, 0.0, False)
    foot = (x + dx * best_dir[0], y + dx * best_dir[1])
    return UpdateResult(best, best_k, foot, best_tau, feasible)
