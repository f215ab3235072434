import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from core import Field, GridConfig


@dataclass(frozen=True)
class Grid:
    """Equal-measure partition of a box domain; cell index order is row-major."""

    dim: int
    bounds: Tuple[Tuple[float, float], ...]
    cells_per_axis: Tuple[int, ...]
    cell_measure: float
    centers: np.ndarray
    boundary_adjacent: np.ndarray

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def widths(self) -> np.ndarray:
        return np.array([(b - a) / m for (a, b), m in zip(self.bounds, self.cells_per_axis)])

    @property
    def lower(self) -> np.ndarray:
        return np.array([a for a, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b for _, b in self.bounds])

    @property
    def domain_measure(self) -> float:
        return float(math.prod(b - a for a, b in self.bounds))

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    @property
    def multi_index(self) -> np.ndarray:
        """(n, dim) integer cell coordinates, row-major."""
        return np.stack(
            np.unravel_index(np.arange(self.n), self.cells_per_axis), axis=1
        )

    @property
    def cell_lower_corners(self) -> np.ndarray:
        return self.lower + self.multi_index * self.widths

    def check_field(self, values, name: str = "field") -> Field:
        """Coerce to a float array of length n with finite entries."""
        arr = np.asarray(values, dtype=float)
        if arr.shape != (self.n,):
            raise ValueError(f"{name} has shape {arr.shape}, grid has {self.n} cells")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} has non-finite entries")
        return arr


def build_grid(
    dim: int, bounds: Sequence[Sequence[float]], cells_per_axis: Sequence[int]
) -> Grid:
    """Partition the box ``bounds`` into congruent cells."""
    if dim not in (1, 2):
        raise ValueError(f"Grid dimension must be 1 or 2, got {dim}")

    bounds = [tuple(float(v) for v in interval) for interval in np.atleast_2d(bounds)]
    if isinstance(cells_per_axis, (int, np.integer)):
        cells_per_axis = [cells_per_axis] * dim
    cells = tuple(int(m) for m in cells_per_axis)

    if len(bounds) != dim or len(cells) != dim:
        raise ValueError(f"Need {dim} intervals and {dim} cell counts")
    for a, b in bounds:
        if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
            raise ValueError(f"Empty or inverted interval [{a}, {b}]")
    if any(m < 2 for m in cells):
        raise ValueError(f"Need at least 2 cells per axis, got {cells}")

    widths = [(b - a) / m for (a, b), m in zip(bounds, cells)]
    # Centres as a + (i + 1/2) w, computed per axis then combined row-major
    axis_centers = [
        a + (np.arange(m) + 0.5) * w for (a, _), m, w in zip(bounds, cells, widths)
    ]
    mesh = np.meshgrid(*axis_centers, indexing="ij")
    centers = np.stack([c.ravel() for c in mesh], axis=1)

    index = np.stack(np.unravel_index(np.arange(int(math.prod(cells))), cells), axis=1)
    boundary_adjacent = np.any((index == 0) | (index == np.array(cells) - 1), axis=1)

    centers.flags.writeable = False
    boundary_adjacent.flags.writeable = False

    return Grid(
        dim=dim,
        bounds=tuple(bounds),
        cells_per_axis=cells,
        cell_measure=float(math.prod(widths)),
        centers=centers,
        boundary_adjacent=boundary_adjacent,
    )


def grid_from_config(config: GridConfig) -> Grid:
    return build_grid(config.dim, config.bounds, config.cells_per_axis)


def support_distance_to_boundary(grid: Grid, g: Field) -> float:
    """Distance from the support {g > 0} (as a union of closed cells) to the boundary."""
    g = grid.check_field(g, "g")
    support = g > 0
    if not support.any():
        return float("nan")
    half = grid.widths / 2
    centers = grid.centers[support]
    gaps = np.minimum(centers - half - grid.lower, grid.upper - (centers + half))
    return float(max(np.min(gaps), 0.0))
