"""Optimal point-to-grid assignment and montage rendering.

Embeddings are min-max normalized to the unit square, matched to the centers
of a ceil(sqrt(N))-sided cell grid by an exact Jonker-Volgenant solve on the
squared-distance cost matrix, and rendered as a thumbnail atlas.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from . import _backend
from .images import resize_bilinear


@dataclass
class LapSolution:
    assignment: np.ndarray  # column index per row
    total_cost: float
    u: np.ndarray  # row duals
    v: np.ndarray  # column duals


@dataclass
class GridAssignment:
    grid_side: int
    assignment: np.ndarray  # row-major cell index per point, injective
    total_cost: float


def solve_lap(cost, backend: str | None = None) -> LapSolution:
    """Exact rectangular LAP (N rows into M >= N columns), with dual certificate.

    The duals satisfy cost[i, j] - u[i] - v[j] >= 0 for all pairs and = 0 on
    assigned pairs, up to float roundoff.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost must be a 2D matrix")
    n, m = cost.shape
    if n > m:
        raise ValueError(f"need rows <= columns, got {n}x{m}")
    if not np.all(np.isfinite(cost)):
        raise ValueError("non-finite cost entry")
    rowsol, u, v = _backend.jv_solve(np.ascontiguousarray(cost), backend=backend)
    total = float(cost[np.arange(n), rowsol].sum())
    return LapSolution(assignment=rowsol, total_cost=total, u=u, v=v)


def normalize_unit_square(y: np.ndarray) -> np.ndarray:
    """Min-max normalize each axis into [0, 1]; a degenerate axis maps to 0.5."""
    y = np.asarray(y, dtype=np.float64)
    lo = y.min(axis=0)
    span = y.max(axis=0) - lo
    out = np.empty_like(y)
    for axis in range(y.shape[1]):
        if span[axis] > 0:
            out[:, axis] = (y[:, axis] - lo[axis]) / span[axis]
        else:
            out[:, axis] = 0.5
    return out


def grid_cell_centers(side: int) -> np.ndarray:
    """Row-major cell centers of a side x side grid over the unit square."""
    c, r = np.meshgrid(np.arange(side), np.arange(side))
    return np.stack(
        [(c.ravel() + 0.5) / side, (r.ravel() + 0.5) / side], axis=1
    )


def grid_cost_matrix(y_unit: np.ndarray, side: int) -> np.ndarray:
    centers = grid_cell_centers(side)
    diff = y_unit[:, None, :] - centers[None, :, :]
    return (diff * diff).sum(axis=2)


def gridify(y, backend: str | None = None) -> GridAssignment:
    """Optimally place N embedded points onto the smallest square grid holding them."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != 2 or y.shape[0] < 1:
        raise ValueError("expected an N x 2 embedding with N >= 1")
    n = y.shape[0]
    side = math.ceil(math.sqrt(n))
    cost = grid_cost_matrix(normalize_unit_square(y), side)
    sol = solve_lap(cost, backend=backend)
    return GridAssignment(grid_side=side, assignment=sol.assignment, total_cost=sol.total_cost)


def greedy_gridify_cost(y) -> float:
    """Nearest-free-cell heuristic cost: the baseline the optimal solve must beat."""
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    side = math.ceil(math.sqrt(n))
    cost = grid_cost_matrix(normalize_unit_square(y), side)
    taken = np.zeros(side * side, dtype=bool)
    total = 0.0
    for i in range(n):
        row = np.where(taken, np.inf, cost[i])
        j = int(row.argmin())
        taken[j] = True
        total += cost[i, j]
    return total


def render_montage(corpus: list[np.ndarray], ga: GridAssignment, thumb: int = 64) -> np.ndarray:
    """Paste each image's thumbnail into its assigned cell; empty cells stay black."""
    if thumb < 8:
        raise ValueError("thumbnail size must be at least 8 px")
    if len(corpus) != len(ga.assignment):
        raise ValueError("corpus length must match assignment length")
    side = ga.grid_side
    out = np.zeros((side * thumb, side * thumb), dtype=np.uint8)
    for img, cell in zip(corpus, ga.assignment):
        r, c = divmod(int(cell), side)
        tile = img if img.shape == (thumb, thumb) else resize_bilinear(img, thumb, thumb)
        out[r * thumb : (r + 1) * thumb, c * thumb : (c + 1) * thumb] = tile
    return out


def assignment_rows(ga: GridAssignment) -> list[tuple[int, int, int]]:
    """(point_index, row, col) triples for the CSV dump."""
    side = ga.grid_side
    return [(i, int(cell) // side, int(cell) % side) for i, cell in enumerate(ga.assignment)]


def save_assignment_csv(path, ga: GridAssignment) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("point_index,row,col\n")
        for i, r, c in assignment_rows(ga):
            fh.write(f"{i},{r},{c}\n")
