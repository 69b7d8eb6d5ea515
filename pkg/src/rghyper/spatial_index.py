"""Fixed-radius neighbour search on a uniform grid of buckets.

Neighbours are points at distance strictly less than the radius. Distances
are compared as squared norms against ``r * r``.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict

import numpy as np

from rghyper import _backend
from rghyper._pykernels import sqdist_rows

# default cell width is the radius inflated by this factor, so float
# rounding of cell coordinates never pushes a true neighbour two cells away
CELL_INFLATION = 1.0 + 1e-9
_EPS = np.finfo(np.float64).eps


def default_cell_width(r: float) -> float:
    return r * CELL_INFLATION


def _as_points(points) -> np.ndarray:
    if hasattr(points, "points"):
        points = points.points
    if isinstance(points, np.ndarray):
        pts = np.asarray(points, dtype=np.float64)
    else:
        rows = [tuple(p) for p in points]
        if len({len(p) for p in rows}) > 1:
            raise ValueError("points have mixed dimensions")
        pts = np.array(rows, dtype=np.float64)
    if pts.ndim == 1 and pts.size == 0:
        return pts.reshape(0, 0)
    if pts.ndim != 2:
        raise ValueError("points must form a (count, d) array")
    return pts


class UniformGrid:
    """Points bucketed by ``floor(coord / cell_width)`` on every axis."""

    def __init__(self, points, cell_width: float):
        if not cell_width > 0 or not math.isfinite(cell_width):
            raise ValueError("cell_width must be positive and finite")
        self.points = _as_points(points)
        self.cell_width = float(cell_width)
        self.dimension = self.points.shape[1]
        cells = np.floor(self.points / self.cell_width).astype(np.int64)
        buckets = defaultdict(list)
        for i, c in enumerate(map(tuple, cells.tolist())):
            buckets[c].append(i)
        self.buckets = dict(buckets)
        self._amax = float(np.abs(self.points).max() / self.cell_width) if len(self.points) else 0.0

    def __len__(self) -> int:
        return self.points.shape[0]

    def cell_of(self, x) -> tuple[int, ...]:
        return tuple(int(v) for v in np.floor(np.asarray(x, dtype=np.float64) / self.cell_width))

    def neighbors_within(self, query, r: float) -> list[int]:
        """Sorted indices ``i`` with ``|points[i] - query| < r``."""
        q = np.asarray(query, dtype=np.float64)
        if len(self) == 0:
            return []
        if q.shape != (self.dimension,):
            raise ValueError("query dimension does not match the grid")
        if r < 0:
            raise ValueError("radius must be non-negative")
        if r == 0:
            return []
        qmax = float(np.abs(q).max()) / self.cell_width
        reach = max(1, math.ceil(r / self.cell_width
                                 + 4 * _EPS * (max(self._amax, qmax) + 1.0)))
        home = self.cell_of(q)
        if (2 * reach + 1) ** self.dimension > len(self.buckets):
            # scanning every occupied bucket is cheaper than enumerating cells
            cand = [i for c, idx in self.buckets.items()
                    if all(abs(a - b) <= reach for a, b in zip(c, home)) for i in idx]
        else:
            cand = []
            for off in itertools.product(range(-reach, reach + 1), repeat=self.dimension):
                cell = tuple(h + o for h, o in zip(home, off))
                cand.extend(self.buckets.get(cell, ()))
        if not cand:
            return []
        cand = np.array(sorted(cand), dtype=np.int64)
        d2 = sqdist_rows(self.points[cand], q)
        return cand[d2 < r * r].tolist()


def build(points, cell_width: float) -> UniformGrid:
    return UniformGrid(points, cell_width)


def neighbors_within(grid: UniformGrid, query, r: float) -> list[int]:
    return grid.neighbors_within(query, r)


def brute_force_within(points, query, r: float) -> list[int]:
    """O(n) scan; the reference the grid is tested against."""
    pts = _as_points(points)
    if len(pts) == 0:
        return []
    d2 = sqdist_rows(pts, np.asarray(query, dtype=np.float64))
    return np.flatnonzero(d2 < r * r).tolist()


def pairs_within(A, B, r: float, cell_width: float | None = None, ordered: bool = True):
    """All index pairs ``(i, j)`` with ``|A[i] - B[j]| < r``, sorted by
    ``(j, i)`` unless ``ordered`` is false. Uses the compiled kernel when available; high-dimensional
    inputs where the cell neighbourhood outnumbers the points fall back to a
    brute-force scan automatically."""
    A = _as_points(A)
    B = _as_points(B)
    if len(A) and len(B) and A.shape[1] != B.shape[1]:
        raise ValueError("point sets differ in dimension")
    if r < 0:
        raise ValueError("radius must be non-negative")
    if cell_width is None:
        cell_width = default_cell_width(r) if r > 0 else 1.0
    return _backend.kernels.radius_pairs(A, B, float(r), float(cell_width), ordered)
