"""Sampling domains and point processes.

Randomness comes from numpy's counter-based Philox generator keyed by a
``SeedSequence``. Per-trial streams are derived with :func:`derive_seed`
from a master seed and integer labels (n, trial index, process role), so a
trial's points never depend on which worker ran it or in what order.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

import numpy as np

POISSON = "poisson"
FIXED = "fixed"
MODES = (POISSON, FIXED)

# process roles for seed derivation
ROLE_NODES = 0
ROLE_CENTERS = 1


def derive_seed(seed: int, *labels: int) -> int:
    """A 64-bit seed derived deterministically from ``seed`` and ``labels``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(x) for x in labels))
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with the uniform density ``f = 1 / volume``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(x) for x in self.lower)
        upper = tuple(float(x) for x in self.upper)
        if len(lower) == 0:
            raise ValueError("dimension must be at least 1")
        if len(lower) != len(upper):
            raise ValueError("lower and upper bounds differ in dimension")
        if not all(math.isfinite(x) for x in lower + upper):
            raise ValueError("box bounds must be finite")
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            raise ValueError("need lower < upper on every axis")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, d: int) -> "Box":
        if d < 1:
            raise ValueError("dimension must be at least 1")
        return cls((0.0,) * d, (1.0,) * d)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def sides(self) -> np.ndarray:
        return np.subtract(self.upper, self.lower)

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))

    @property
    def diameter(self) -> float:
        return float(np.sqrt(np.sum(self.sides**2)))

    @property
    def f_min(self) -> float:
        return 1.0 / self.volume

    def density(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        return np.where(self.contains(x), self.f_min, 0.0)

    def contains(self, points) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.all((p >= self.lower) & (p <= self.upper), axis=1)

    def to_dict(self) -> dict:
        return {"kind": "box", "density": "uniform",
                "lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, data: dict) -> "Box":
        if data.get("kind", "box") != "box" or data.get("density", "uniform") != "uniform":
            raise ValueError("only uniform boxes are supported")
        return cls(tuple(data["lower"]), tuple(data["upper"]))


def measure(domain: Box, region) -> float:
    """Probability mass of ``region`` (a ``(lower, upper)`` pair) under the
    domain's uniform density; the region is clipped to the domain first."""
    lo, hi = (np.asarray(v, dtype=np.float64) for v in region)
    if lo.shape != (domain.dim,) or hi.shape != (domain.dim,):
        raise ValueError("region dimension does not match the domain")
    if np.any(lo > hi):
        raise ValueError("region needs lower <= upper on every axis")
    ext = np.minimum(hi, domain.upper) - np.maximum(lo, domain.lower)
    if np.any(ext <= 0):
        return 0.0
    return float(np.prod(ext / domain.sides))


@dataclass(frozen=True, eq=False)
class PointSample:
    """An immutable ``(count, d)`` array of points plus its provenance."""

    points: np.ndarray
    mode: str
    n: float
    seed: int | None
    domain: Box = field(repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, ndmin=2, copy=True)
        if pts.size == 0:
            pts = pts.reshape(0, self.domain.dim)
        if pts.ndim != 2 or pts.shape[1] != self.domain.dim:
            raise ValueError("points must be a (count, d) array matching the domain")
        if self.mode not in MODES and self.mode != "given":
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @classmethod
    def given(cls, points, domain: Box | None = None) -> "PointSample":
        """Wrap explicit coordinates; the domain defaults to their bounding box
        (padded when degenerate)."""
        pts = np.array(points, dtype=np.float64, ndmin=2)
        if domain is None:
            if pts.size == 0:
                raise ValueError("cannot infer a domain from no points")
            lo, hi = pts.min(axis=0), pts.max(axis=0)
            hi = np.where(hi > lo, hi, lo + 1.0)
            domain = Box(tuple(lo), tuple(hi))
        return cls(pts, "given", len(pts), None, domain)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PointSample):
            return NotImplemented
        return (self.mode == other.mode and self.n == other.n and self.seed == other.seed
                and self.domain == other.domain
                and np.array_equal(self.points, other.points))

    __hash__ = None


def sample(domain: Box, mode: str, n, seed: int) -> PointSample:
    """Draw points i.i.d. from the domain's uniform density.

    ``mode="poisson"`` draws the count from Poisson(n) first (a Poisson
    process of intensity ``n * f``); ``mode="fixed"`` draws exactly ``n``.
    """
    if domain.dim < 1:
        raise ValueError("dimension must be at least 1")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if isinstance(n, bool) or not isinstance(n, numbers.Real) or not math.isfinite(n):
        raise ValueError("n must be a finite real number")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = make_rng(seed)
    if mode == FIXED:
        if isinstance(n, numbers.Integral):
            count = int(n)
        elif float(n).is_integer():
            count = int(n)
        else:
            raise ValueError("fixed mode needs an integer count")
    else:
        count = int(rng.poisson(float(n)))
    lower = np.asarray(domain.lower)
    pts = lower + domain.sides * rng.random((count, domain.dim))
    # lower + side * u can round up to the upper bound; keep points inside
    np.minimum(pts, domain.upper, out=pts)
    return PointSample(pts, mode, n, int(seed), domain)


def trial_samples(domain: Box, n: int, node_fraction: float, mode: str,
                  master_seed: int, trial: int):
    """Nodes and centres of one Monte Carlo trial.

    Fixed mode draws ``round(node_fraction * n)`` nodes and the rest as
    centres; Poisson mode uses intensities ``node_fraction * n`` and
    ``(1 - node_fraction) * n``. Returns ``(trial_seed, nodes, centers)``.
    """
    tseed = derive_seed(master_seed, n, trial)
    if mode == POISSON:
        n1, n2 = n * node_fraction, n * (1.0 - node_fraction)
    else:
        n1 = int(round(n * node_fraction))
        n2 = int(n) - n1
    nodes = sample(domain, mode, n1, derive_seed(tseed, ROLE_NODES))
    centers = sample(domain, mode, n2, derive_seed(tseed, ROLE_CENTERS))
    return tseed, nodes, centers
