"""Uniform 2D structured grid: geometry, indexing, and the target node set."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Grid2D", "build_grid", "position", "nearest_node"]

_SQUARE_RTOL = 1e-12


@dataclass(frozen=True)
class Grid2D:
    """Node-centered square grid over [xmin, xmax] x [ymin, ymax].

    Each side carries ``n`` nodes including both endpoints, so the spacing is
    ``dx = (xmax - xmin) / (n - 1)`` and node (i, j) sits at
    ``(xmin + i*dx, ymin + j*dx)``.  ``target_nodes`` holds the indices of the
    nodes the target points were snapped to.  Immutable after construction.
    """

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    n: int
    dx: float
    target_nodes: frozenset[tuple[int, int]]

    @property
    def num_nodes(self) -> int:
        return self.n * self.n

    def sorted_targets(self) -> list[tuple[int, int]]:
        """Target nodes in deterministic (i, j) order."""
        return sorted(self.target_nodes)

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def build_grid(
    xmin: float,
    xmax: float,
    ymin: float,
    ymax: float,
    n: int,
    target_points,
) -> Grid2D:
    """Build a uniform square grid and snap each target point to its nearest node."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"node count must be an integer, got {n!r}")
    if n < 3:
        raise ValueError(f"grid needs at least 3 nodes per side, got n={n}")
    if not xmax > xmin:
        raise ValueError(f"invalid x bounds: [{xmin}, {xmax}]")
    if not ymax > ymin:
        raise ValueError(f"invalid y bounds: [{ymin}, {ymax}]")
    width = xmax - xmin
    height = ymax - ymin
    if not math.isclose(width, height, rel_tol=_SQUARE_RTOL, abs_tol=0.0):
        raise ValueError(f"domain must be square, got width={width} height={height}")
    targets = list(target_points)
    if not targets:
        raise ValueError("at least one target point is required")

    dx = width / (n - 1)
    grid = Grid2D(xmin, xmax, ymin, ymax, n, dx, frozenset())
    snapped = frozenset(nearest_node(grid, float(x), float(y)) for x, y in targets)
    return Grid2D(xmin, xmax, ymin, ymax, n, dx, snapped)


def position(grid: Grid2D, i: int, j: int) -> tuple[float, float]:
    """Coordinates of node (i, j)."""
    if not (0 <= i < grid.n and 0 <= j < grid.n):
        raise IndexError(f"node ({i}, {j}) out of range for n={grid.n}")
    return (grid.xmin + i * grid.dx, grid.ymin + j * grid.dx)


def nearest_node(grid: Grid2D, x: float, y: float) -> tuple[int, int]:
    """Node index closest to (x, y); exact half-spacing ties go to the smaller index."""
    if not grid.contains(x, y):
        raise ValueError(f"point ({x}, {y}) lies outside the domain")
    # ceil(t - 1/2) rounds to nearest with half-way ties toward the smaller index.
    i = math.ceil((x - grid.xmin) / grid.dx - 0.5)
    j = math.ceil((y - grid.ymin) / grid.dx - 0.5)
    i = min(max(i, 0), grid.n - 1)
    j = min(max(j, 0), grid.n - 1)
    return (i, j)
