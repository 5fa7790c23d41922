"""End-to-end grid layout: bounding-box grid, dummy padding, assignment.

Projected points are mapped to the cells of a square ceil(sqrt(N)) grid
over their bounding box by approximate minimum-cost matching.  When the
grid has more cells than there are samples, padding instances with zero
cost to every cell absorb the leftovers without disturbing the real
assignments.  Distances are computed with points and cell centers both
normalized to the unit square, so costs are in bounding-box units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .knngraph import ApproxReport, approx_layout, lattice_centers


@dataclass(frozen=True)
class GridSpec:
    """An m x n grid over a bounding box, cell centers in row-major order
    with row 0 along the top edge."""

    m: int
    n: int
    bbox: tuple[float, float, float, float]
    centers: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.m * self.n

    def cell_rowcol(self, cell: int) -> tuple[int, int]:
        return cell // self.n, cell % self.n


@dataclass
class GridAssignment:
    """Bijection between real samples and grid cells.

    cell_of_sample[i] is sample i's cell; sample_of_cell[c] is -1 for the
    cells that held padding instances.
    """

    grid: GridSpec
    cell_of_sample: np.ndarray
    sample_of_cell: np.ndarray
    total_cost: float
    k_used: int
    report: ApproxReport


def make_grid(points, n_real: int) -> GridSpec:
    """Square grid with ceil(sqrt(n_real)) cells per side over the points'
    tight bounding box; degenerate axes are widened by 1e-9."""
    if n_real < 1:
        raise ValueError(f"n_real must be positive, got {n_real}")
    pts = np.asarray(points, dtype=np.float64)
    side = math.isqrt(n_real)
    if side * side < n_real:
        side += 1
    min_x, min_y = pts[:, 0].min(), pts[:, 1].min()
    max_x, max_y = pts[:, 0].max(), pts[:, 1].max()
    if max_x - min_x <= 0.0:
        max_x = min_x + 1e-9
    if max_y - min_y <= 0.0:
        max_y = min_y + 1e-9
    bbox = (float(min_x), float(min_y), float(max_x), float(max_y))
    return GridSpec(m=side, n=side, bbox=bbox, centers=lattice_centers(bbox, side, side))


def layout(points, k: int, *, with_baseline: bool = False) -> GridAssignment:
    """Assign every sample to a unique grid cell, minimizing total travel.

    k is the neighbor count of the sparse matching; values above the cell
    count clamp with a warning.  Deterministic for fixed inputs.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    pts = np.asarray(points, dtype=np.float64)
    n_real = pts.shape[0]
    spec = make_grid(pts, n_real)
    n_cells = spec.n_cells
    k_used = k
    if k > n_cells:
        warnings.warn(f"k={k} exceeds the cell count {n_cells}; clamping", stacklevel=2)
        k_used = n_cells

    min_x, min_y, max_x, max_y = spec.bbox
    norm = np.empty((n_cells, 2))
    norm[:n_real, 0] = (pts[:, 0] - min_x) / (max_x - min_x)
    norm[:n_real, 1] = (pts[:, 1] - min_y) / (max_y - min_y)
    norm[n_real:] = 0.0
    norm_centers = lattice_centers((0.0, 0.0, 1.0, 1.0), spec.m, spec.n)

    assignment, report = approx_layout(
        norm,
        norm_centers,
        k_used,
        grid_shape=(spec.m, spec.n),
        n_real=n_real,
        with_baseline=with_baseline,
    )
    cell_of_sample = assignment.perm[:n_real].copy()
    sample_of_cell = np.full(n_cells, -1, dtype=np.int64)
    sample_of_cell[cell_of_sample] = np.arange(n_real)
    return GridAssignment(
        grid=spec,
        cell_of_sample=cell_of_sample,
        sample_of_cell=sample_of_cell,
        total_cost=assignment.total_cost,
        k_used=k_used,
        report=report,
    )
