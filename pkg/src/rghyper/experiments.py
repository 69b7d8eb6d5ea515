"""Monte Carlo sweeps of the critical radius and checks of the coverage
implication.

Every trial draws its points from a seed derived from ``(master_seed, n,
trial)``, so a sweep's records are a pure function of its configuration,
whatever the thread count.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from rghyper._parallel import ordered_map
from rghyper.geometry import FIXED, MODES, POISSON, Box, trial_samples
from rghyper.theory import (TheoryParams, build_coverage_grid, coverage_holds,
                            radius_strong, radius_weak)
from rghyper.threshold import (BISECTION, EXACT, critical_radius_bisection,
                               critical_radius_exact, is_connected_at)

log = logging.getLogger(__name__)

METHODS = (EXACT, BISECTION)


def default_n_values(count: int = 8, lo: int = 1000, hi: int = 10000) -> list[int]:
    return [int(v) for v in np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))]


@dataclass
class SweepConfig:
    d: int = 2
    n_values: list[int] = field(default_factory=default_n_values)
    trials: int = 50
    split: tuple[float, float] = (0.8, 0.2)
    mode: str = FIXED
    master_seed: int = 0
    method: str = EXACT
    bisection_tol: float = 1e-9
    algorithm: str = "auto"

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        self.split = tuple(float(x) for x in self.split)
        self.validate()

    def validate(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if not self.n_values:
            raise ValueError("n_values is empty")
        if any(n < 10 for n in self.n_values):
            raise ValueError("every n must be at least 10")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if len(self.split) != 2 or min(self.split) <= 0 or abs(sum(self.split) - 1) > 1e-9:
            raise ValueError("split fractions must be positive and sum to 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not self.bisection_tol > 0:
            raise ValueError("bisection_tol must be positive")

    @property
    def node_fraction(self) -> float:
        return self.split[0]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["split"] = list(self.split)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    seed: int
    n1: int
    n2: int
    r_star: float
    method: str
    # excluded from equality and from default output: it varies run to run
    wall_time: float = field(default=0.0, compare=False)

    @property
    def never_connects(self) -> bool:
        return math.isinf(self.r_star)


@dataclass(frozen=True)
class LevelStats:
    n: int
    trials: int
    mean: float | None
    min: float | None
    max: float | None
    never_connects: int = 0


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[TrialRecord, ...]
    levels: tuple[LevelStats, ...]
    slope_fit: SlopeFit | None
    min_slope: float | None
    max_slope: float | None

    def to_dict(self) -> dict:
        def fit(f):
            return None if f is None else asdict(f)
        return {"config": self.config.to_dict(),
                "aggregates": [asdict(s) for s in self.levels],
                "slope_fit": fit(self.slope_fit),
                "min_slope": self.min_slope, "max_slope": self.max_slope}


def fit_slope(points) -> SlopeFit:
    """Least-squares line through ``(log n, log r)``."""
    pts = [(float(n), float(r)) for n, r in points]
    if len({n for n, _ in pts}) < 2:
        raise ValueError("need at least two distinct n values")
    if any(n <= 0 or r <= 0 for n, r in pts):
        raise ValueError("n and r must be positive")
    x = np.log([n for n, _ in pts])
    y = np.log([r for _, r in pts])
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym))) / sxx
    intercept = float(ym - slope * xm)
    resid = float(np.sqrt(np.sum((y - (intercept + slope * x)) ** 2)))
    return SlopeFit(slope, intercept, resid)


def _run_trial(cfg: SweepConfig, domain: Box, n: int, t: int) -> TrialRecord:
    seed, nodes, centers = trial_samples(domain, n, cfg.node_fraction, cfg.mode, cfg.master_seed, t)
    t0 = time.perf_counter()
    if len(nodes) + len(centers) < 2:
        # a Poisson draw this small is connected at every radius
        return TrialRecord(n, t, seed, len(nodes), len(centers), 0.0, cfg.method,
                           time.perf_counter() - t0)
    if cfg.method == EXACT:
        res = critical_radius_exact(nodes, centers, cfg.algorithm)
    else:
        res = critical_radius_bisection(nodes, centers, tol=cfg.bisection_tol)
    return TrialRecord(n, t, seed, len(nodes), len(centers), res.r_star, cfg.method,
                       time.perf_counter() - t0)


def _level(n: int, recs: list[TrialRecord]) -> LevelStats:
    bad = sum(r.never_connects for r in recs)
    if bad:
        log.warning("n=%d: %d of %d trials never connect; level excluded", n, bad, len(recs))
        return LevelStats(n, len(recs), None, None, None, bad)
    vals = np.array([r.r_star for r in recs])
    return LevelStats(n, len(recs), float(vals.mean()), float(vals.min()), float(vals.max()), 0)


def run_sweep(config: SweepConfig, threads: int | None = 1) -> SweepResult:
    config.validate()
    domain = Box.unit(config.d)
    items = [(n, t) for n in config.n_values for t in range(config.trials)]
    records = ordered_map(lambda it: _run_trial(config, domain, *it), items, threads)
    levels = []
    for n in config.n_values:
        levels.append(_level(n, [r for r in records if r.n == n]))
    ok = [s for s in levels if s.mean is not None]
    fits = [None, None, None]
    if len({s.n for s in ok}) >= 2 and all(s.min > 0 for s in ok):
        fits = [fit_slope([(s.n, getattr(s, k)) for s in ok]) for k in ("mean", "min", "max")]
    return SweepResult(config, tuple(records), tuple(levels), fits[0],
                       None if fits[1] is None else fits[1].slope,
                       None if fits[2] is None else fits[2].slope)


def _num(x: float) -> str:
    if math.isinf(x):
        return "never"
    return repr(float(x))


def trials_csv(result: SweepResult, timing: bool = False) -> str:
    """One row per trial. ``wall_time_ms`` is left blank unless ``timing``
    is set, so that repeated runs produce identical bytes."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "trial", "seed", "n1", "n2", "r_star", "method", "wall_time_ms"])
    for r in result.records:
        w.writerow([r.n, r.trial, r.seed, r.n1, r.n2, _num(r.r_star), r.method,
                    f"{r.wall_time * 1e3:.3f}" if timing else ""])
    return buf.getvalue()


def aggregates_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "mean_r", "min_r", "max_r", "trials"])
    for s in result.levels:
        w.writerow([s.n] + ["" if v is None else repr(v) for v in (s.mean, s.min, s.max)] + [s.trials])
    return buf.getvalue()


def result_json(result: SweepResult) -> str:
    return json.dumps(result.to_dict(), indent=2) + "\n"


# -- coverage implication -------------------------------------------------

@dataclass(frozen=True)
class ValidationRow:
    n: int
    r: float
    trials: int
    covered: int
    connected: int
    violations: int

    @property
    def coverage_fraction(self) -> float:
        return self.covered / self.trials

    @property
    def connected_fraction(self) -> float:
        return self.connected / self.trials

    def connected_interval(self, z: float = 1.959963984540054) -> tuple[float, float]:
        return wilson_interval(self.connected, self.trials, z)


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def nondecreasing_within_ci(rows) -> bool:
    """No later n has a connected fraction significantly below an earlier one
    (their 95% intervals never separate in the decreasing direction)."""
    rows = list(rows)
    for i, a in enumerate(rows):
        for b in rows[i + 1:]:
            if b.connected_interval()[1] < a.connected_interval()[0]:
                return False
    return True


def theorem_validation(n_values, d: int, trials: int, seed: int,
                       params: TheoryParams | None = None, bound: str = "strong",
                       mode: str = POISSON, threads: int | None = 1) -> list[ValidationRow]:
    """For each n, at ``r`` from the radius bound: how often every grid
    region holds a node and a centre, how often the graph at ``2 r`` is
    connected, and how often the first holds without the second (which the
    path construction rules out)."""
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be increasing")
    params = params or TheoryParams(d)
    if params.d != d:
        raise ValueError("params dimension does not match d")
    domain = Box.unit(d)
    radius = {"strong": radius_strong, "weak": radius_weak}[bound]
    rows = []
    for n in n_values:
        r = radius(n, params)
        grid = build_coverage_grid(domain, r, params)

        def one(t, n=n, r=r, grid=grid):
            _, nodes, centers = trial_samples(domain, n, params.node_fraction, mode, seed, t)
            cov = coverage_holds(grid, nodes, centers)
            con = is_connected_at(nodes, centers, 2 * r)
            return cov, con

        out = ordered_map(one, range(trials), threads)
        rows.append(ValidationRow(n, r, trials, sum(c for c, _ in out), sum(k for _, k in out),
                                  sum(c and not k for c, k in out)))
    return rows


def validation_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "r", "trials", "coverage_fraction", "connected_fraction",
                "connected_ci_low", "connected_ci_high", "violations"])
    for row in rows:
        lo, hi = row.connected_interval()
        w.writerow([row.n, repr(row.r), row.trials, repr(row.coverage_fraction),
                    repr(row.connected_fraction), repr(lo), repr(hi), row.violations])
    return buf.getvalue()
