"""CSV and JSON serialization for solver outputs.

Solution CSV: header ``x,y,T,astar``, rows in j-outer/i-inner order, 17
significant digits, sentinel written as ``inf``, control index -1 when
absent.  Re-activation CSV: header ``i,j,I``, dense (zeros included), same
row order.  All writers are deterministic for a fixed input.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .grid import Grid2D, position
from .local_update import SENTINEL

__all__ = [
    "write_solution_csv",
    "read_solution_csv",
    "write_stats_json",
    "write_reactivation_csv",
    "read_reactivation_csv",
]


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_solution_csv(path, grid: Grid2D, field, include_astar: bool = True) -> None:
    """Write the value field (and optimal-control indices) as CSV."""
    vals = field.values
    ast = field.astar
    lines = ["x,y,T,astar"]
    for j in range(grid.n):
        for i in range(grid.n):
            x, y = position(grid, i, j)
            v = vals[i, j]
            t = "inf" if v >= SENTINEL else _fmt(v)
            a = int(ast[i, j]) if include_astar else -1
            lines.append(f"{_fmt(x)},{_fmt(y)},{t},{a}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_solution_csv(path):
    """Read a solution CSV back into (values, astar) arrays.

    The grid size is inferred from the row count; ``inf`` entries map back to
    the sentinel, so a write/read round trip is exact.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != "x,y,T,astar":
        raise ValueError(f"{path}: not a solution CSV (bad header)")
    rows = lines[1:]
    n = math.isqrt(len(rows))
    if n * n != len(rows):
        raise ValueError(f"{path}: row count {len(rows)} is not a perfect square")
    values = np.empty((n, n))
    astar = np.empty((n, n), dtype=np.int32)
    for r, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != 4:
            raise ValueError(f"{path}: malformed row {r + 2}: {row!r}")
        j, i = divmod(r, n)
        t = parts[2]
        values[i, j] = SENTINEL if t == "inf" else float(t)
        astar[i, j] = int(parts[3])
    return values, astar


def write_stats_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_reactivation_csv(path, insertions: np.ndarray) -> None:
    """Write the per-node active-list insertion counts as dense i,j,I triples."""
    n = insertions.shape[0]
    lines = ["i,j,I"]
    for j in range(n):
        for i in range(n):
            lines.append(f"{i},{j},{int(insertions[i, j])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_reactivation_csv(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != "i,j,I":
        raise ValueError(f"{path}: not a re-activation CSV (bad header)")
    rows = lines[1:]
    n = math.isqrt(len(rows))
    if n * n != len(rows):
        raise ValueError(f"{path}: row count {len(rows)} is not a perfect square")
    out = np.empty((n, n), dtype=np.int32)
    for row in rows:
        i_s, j_s, c_s = row.split(",")
        out[int(i_s), int(j_s)] = int(c_s)
    return out
