"""Radius bounds for connectivity and the cube-grid coverage event.

The grid partitions space into half-open cubes ``[k w, (k+1) w)`` of width
``w = gamma * r`` anchored at the domain's lower corner. For every cube
lying inside the domain, its region is the cube together with its
adjacent cubes, clipped to the domain. With ``gamma = 1/C`` and
``C = 3 sqrt(d)`` any two points of a region are closer than ``r``.

If every region holds a node and a centre, the bipartite graph at radius
``2 r`` is connected: walk cube to cube, alternating node and centre.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from rghyper._parallel import ordered_map
from rghyper.geometry import POISSON, Box, trial_samples

W_CHOICES = ("loglog", "sqrtlog")
_MAX_DENSE_CELLS = 2 * 10**8


def split_constant(node_fraction: float) -> float:
    """Smallest K with ``n1 >= n/K`` and ``n2 >= n/K`` for the split."""
    if not 0.0 < node_fraction < 1.0:
        raise ValueError("node fraction must lie strictly between 0 and 1")
    p = Fraction(node_fraction).limit_denominator(10**9)
    return float(1 / min(p, 1 - p))


def _w_value(w, n: float) -> float:
    if isinstance(w, str):
        if w == "loglog":
            return math.log(math.log(n))
        if w == "sqrtlog":
            return math.sqrt(math.log(n))
        if w.startswith("const:"):
            return float(w.split(":", 1)[1])
        raise ValueError(f"unknown w(n) {w!r}; use loglog, sqrtlog, const:<value> or a number")
    return float(w)


@dataclass(frozen=True)
class TheoryParams:
    """Constants of the radius bounds.

    ``C`` defaults to ``3 sqrt(d)``, the diameter factor of a 3x..x3 block
    of cubes; ``w`` is the slowly growing term of the weak bound.
    """

    d: int
    node_fraction: float = 0.8
    C: float | None = None
    f_min: float = 1.0
    epsilon: float = 1.0
    w: str | float = "loglog"
    K: float = field(init=False)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be at least 1")
        if self.C is None:
            object.__setattr__(self, "C", 3.0 * math.sqrt(self.d))
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not self.f_min > 0:
            raise ValueError("f_min must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        _w_value(self.w, 16.0)
        object.__setattr__(self, "K", split_constant(self.node_fraction))

    @property
    def gamma(self) -> float:
        return 1.0 / self.C

    @property
    def center_fraction(self) -> float:
        return 1.0 - self.node_fraction

    def w_of(self, n: float) -> float:
        return _w_value(self.w, n)

    def to_dict(self) -> dict:
        return {"d": self.d, "node_fraction": self.node_fraction, "K": self.K,
                "C": self.C, "gamma": self.gamma, "f_min": self.f_min,
                "epsilon": self.epsilon, "w": self.w}


def _solve(n: int, p: TheoryParams, rhs: float) -> float:
    if rhs <= 0:
        raise ValueError("bound right-hand side is not positive for this n")
    return (p.K * p.C**p.d * rhs / (n * p.f_min)) ** (1.0 / p.d)


def _check_n(n):
    if n < 3:
        raise ValueError("n must be at least 3 so that log log n > 0")


def radius_weak(n: int, p: TheoryParams) -> float:
    """Radius at which ``n f_min r^d / (K C^d) = log n - log log n + w(n)``."""
    _check_n(n)
    ln = math.log(n)
    return _solve(n, p, ln - math.log(ln) + p.w_of(n))


def radius_strong(n: int, p: TheoryParams) -> float:
    """Radius at which ``n f_min r^d / (K C^d) = 2 log n + eps log log n``."""
    _check_n(n)
    ln = math.log(n)
    return _solve(n, p, 2.0 * ln + p.epsilon * math.log(ln))


@dataclass(frozen=True, eq=False)
class CoverageGrid:
    """Interior cubes and their neighbourhood regions.

    ``interior[i]`` is the integer cube coordinate of the i-th interior
    cube, ``regions[i]`` the ``(lower, upper)`` corners of its region (the
    clipped 3x..x3 block is itself a box), and ``open_upper[i, k]`` says
    whether that region's upper face on axis k is open (it ends at a
    half-open cube boundary rather than at the domain boundary).
    """

    domain: Box
    r: float
    cube_width: float
    interior_shape: tuple[int, ...]
    interior: np.ndarray = field(repr=False)
    regions: np.ndarray = field(repr=False)
    open_upper: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.interior.shape[0]

    def region_boxes(self, i: int) -> list[tuple[np.ndarray, np.ndarray]]:
        """Region ``i`` as the list of clipped adjacent cubes it is made of."""
        lower = np.asarray(self.domain.lower)
        upper = np.asarray(self.domain.upper)
        w = self.cube_width
        out = []
        for off in np.ndindex(*(3,) * self.domain.dim):
            k = self.interior[i] + np.asarray(off) - 1
            lo = np.maximum(lower + k * w, lower)
            hi = np.minimum(lower + (k + 1) * w, upper)
            if np.all(hi > lo):
                out.append((lo, hi))
        return out

    def cell_index(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        c = np.floor((pts - np.asarray(self.domain.lower)) / self.cube_width).astype(np.int64)
        return np.clip(c, 0, np.asarray(self.interior_shape))


def _interior_counts(domain: Box, w: float) -> list[int]:
    counts = []
    for lo, hi in zip(domain.lower, domain.upper):
        m = int(math.floor((hi - lo) / w))
        while m > 0 and lo + m * w > hi:
            m -= 1
        while lo + (m + 1) * w <= hi:
            m += 1
        counts.append(m)
    return counts


def _axis_regions(lo: float, hi: float, w: float, m: int):
    k = np.arange(m)
    a = np.maximum(lo + (k - 1) * w, lo)
    top = lo + (k + 2) * w
    b = np.minimum(top, hi)
    return a, b, top <= hi


def _diameter_ok(axes, r: float) -> bool:
    """Exact check that every region's points are closer than ``r``.

    A region's supremum distance is its corner-to-corner length; it is
    attained only if every axis is closed."""
    r2 = Fraction(r) ** 2
    total = Fraction(0)
    all_closed_at_max = True
    for a, b, is_open in axes:
        ext = [Fraction(float(y)) - Fraction(float(x)) for x, y in zip(a, b)]
        emax = max(ext)
        total += emax * emax
        if not any(e == emax and not o for e, o in zip(ext, is_open)):
            all_closed_at_max = False
    if total < r2:
        return True
    return total == r2 and not all_closed_at_max


def build_coverage_grid(domain: Box, r: float, p: TheoryParams) -> CoverageGrid:
    if not r > 0:
        raise ValueError("r must be positive")
    if p.d != domain.dim:
        raise ValueError("parameters and domain differ in dimension")
    w = p.gamma * r
    while True:
        counts = _interior_counts(domain, w)
        if min(counts) == 0:
            raise ValueError("cube width gamma*r leaves no cube inside the domain")
        axes = [_axis_regions(lo, hi, w, m) for lo, hi, m in zip(domain.lower, domain.upper, counts)]
        if _diameter_ok(axes, r):
            break
        # gamma*r rounded up past the bound; shrink by one ulp
        w = math.nextafter(w, 0.0)
    if math.prod(counts) > _MAX_DENSE_CELLS:
        raise ValueError("coverage grid too fine for the domain")
    interior = np.array(list(np.ndindex(*counts)), dtype=np.int64).reshape(-1, domain.dim)
    lo = np.stack([axes[k][0][interior[:, k]] for k in range(domain.dim)], axis=1)
    hi = np.stack([axes[k][1][interior[:, k]] for k in range(domain.dim)], axis=1)
    open_upper = np.stack([axes[k][2][interior[:, k]] for k in range(domain.dim)], axis=1)
    regions = np.stack([lo, hi], axis=1)
    grid = CoverageGrid(domain, float(r), w, tuple(counts), interior, regions, open_upper)
    vol = np.prod(hi - lo, axis=1)
    assert np.all(vol * domain.f_min >= domain.f_min * w**domain.dim * (1 - 1e-12))
    assert len(grid) * w**domain.dim <= domain.volume * (1 + 1e-12)
    return grid


def covered_regions(grid: CoverageGrid, points) -> np.ndarray:
    """Boolean per interior cube: does its region contain one of ``points``?"""
    shape = tuple(m + 1 for m in grid.interior_shape)
    occ = np.zeros(shape, dtype=bool)
    pts = np.asarray(points, dtype=np.float64)
    if len(pts):
        pts = pts[grid.domain.contains(pts)]
        occ[tuple(grid.cell_index(pts).T)] = True
    # Chebyshev-1 dilation, one axis at a time
    for ax in range(occ.ndim):
        grown = occ.copy()
        lead = [slice(None)] * occ.ndim
        trail = [slice(None)] * occ.ndim
        lead[ax], trail[ax] = slice(1, None), slice(None, -1)
        grown[tuple(lead)] |= occ[tuple(trail)]
        grown[tuple(trail)] |= occ[tuple(lead)]
        occ = grown
    return occ[tuple(grid.interior.T)]


def coverage_holds(grid: CoverageGrid, sample_a, sample_b) -> bool:
    """Every region holds at least one point of each sample."""
    pa = getattr(sample_a, "points", sample_a)
    pb = getattr(sample_b, "points", sample_b)
    return bool(covered_regions(grid, pa).all() and covered_regions(grid, pb).all())


def coverage_probability(n: int, p: TheoryParams, r: float, trials: int, seed: int,
                         domain: Box | None = None, threads: int | None = 1) -> float:
    """Fraction of trials whose Poisson nodes and centres cover every region."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    domain = domain or Box.unit(p.d)
    grid = build_coverage_grid(domain, r, p)

    def one(t):
        _, nodes, centers = trial_samples(domain, n, p.node_fraction, POISSON, seed, t)
        return coverage_holds(grid, nodes, centers)

    return sum(ordered_map(one, range(trials), threads)) / trials
