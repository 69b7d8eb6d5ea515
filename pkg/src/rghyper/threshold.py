"""Critical connectivity radius of a bipartite geometric graph.

Edges need distance strictly below the radius, so the reported ``r_star``
is an infimum: the graph at ``r_star`` itself is disconnected and every
``r > r_star`` connects it. ``r_star`` is the longest edge of a minimum
bottleneck spanning tree of the complete node-centre distance graph.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from rghyper import _backend
from rghyper._pykernels import sqdist_rows
from rghyper.geometry import PointSample
from rghyper.hypergraph import build_bipartite, component_count
from rghyper.spatial_index import pairs_within

log = logging.getLogger(__name__)

EXACT = "exact_bottleneck"
BISECTION = "bisection"
ALGORITHMS = ("auto", "prim", "grid", "kruskal")
DEFAULT_MAX_PAIRS = 10**8


@dataclass(frozen=True)
class Certificate:
    node: int
    center: int
    distance: float


@dataclass(frozen=True)
class CriticalRadiusResult:
    r_star: float
    method: str
    iterations: int = 0
    certificate: Certificate | None = None

    @property
    def never_connects(self) -> bool:
        return math.isinf(self.r_star)

    def to_dict(self) -> dict:
        out = {"r_star": None if self.never_connects else self.r_star,
               "never_connects": self.never_connects,
               "method": self.method, "iterations": self.iterations, "certificate": None}
        if self.certificate is not None:
            c = self.certificate
            out["certificate"] = {"node": c.node, "center": c.center, "distance": c.distance}
        return out


def radius_from_sqdist(d2: float) -> float:
    """Largest float ``r`` with ``r * r <= d2``, i.e. the radius at which an
    edge of squared length ``d2`` is still excluded under ``d2 < r * r``."""
    r = math.sqrt(d2)
    while r * r > d2:
        r = math.nextafter(r, 0.0)
    return r


def connectable(n_nodes: int, n_centers: int) -> bool:
    """Whether some radius connects the graph: bipartite graphs have no
    node-node or centre-centre edges."""
    return n_nodes + n_centers <= 1 or (n_nodes >= 1 and n_centers >= 1)


def _points(s) -> np.ndarray:
    return s.points if isinstance(s, PointSample) else np.asarray(s, dtype=np.float64)


def _diameter(nodes, centers) -> float:
    """Diameter covering both samples: their domains and their points."""
    diam = 0.0
    for s in (nodes, centers):
        if isinstance(s, PointSample):
            diam = max(diam, s.domain.diameter)
    pts = np.concatenate([_points(nodes), _points(centers)])
    if len(pts):
        diam = max(diam, float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0))))
    return diam


def _unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def _grid_efficient(d: int, n_centers: int) -> bool:
    # beyond d = 4 the dense scan wins even when the 3^d neighbourhood fits
    return d <= 4 and 3**d <= n_centers


def bottleneck_prim(A, B):
    return _backend.kernels.bottleneck_prim(A, B)


def bottleneck_kruskal(A, B):
    """Sort every node-centre pair by length and merge until connected."""
    na, nb = len(A), len(B)
    d2 = _backend.kernels.all_pair_sqdist(A, B)
    order = np.argsort(d2, kind="stable")
    k = _backend.kernels.kruskal_sweep(na, nb, order)
    e = int(order[k])
    return float(d2[e]), e // nb, e % nb


def bottleneck_grid(A, B):
    """Kruskal restricted to pairs shorter than a trial radius, growing the
    radius until the restricted graph connects. Exact: every pair shorter
    than the bottleneck is among the candidates once the graph connects."""
    na, nb = len(A), len(B)
    d = A.shape[1]
    lo = np.minimum(A.min(axis=0), B.min(axis=0))
    hi = np.maximum(A.max(axis=0), B.max(axis=0))
    diam = float(np.linalg.norm(hi - lo))
    if diam == 0.0:
        return bottleneck_prim(A, B)
    vol = float(np.prod(np.maximum(hi - lo, diam * 1e-12)))
    # radius at which the centres' balls are expected to cover the box
    # (inflated for boundary effects) as the first candidate radius
    r = 1.3 * (vol * math.log(max(nb, 2)) / (nb * _unit_ball_volume(d))) ** (1.0 / d)
    r = min(max(r, diam * 1e-6), diam)
    while True:
        ia, ib = pairs_within(A, B, r, ordered=False)
        if ia.size >= na + nb - 1:
            d2 = sqdist_rows(A[ia], B[ib])
            order = np.argsort(d2)
            k = _backend.kernels.kruskal_sweep(na, nb, (ia * nb + ib)[order])
            if k >= 0:
                e = int(order[k])
                return float(d2[e]), int(ia[e]), int(ib[e])
        if r > diam:
            raise RuntimeError("candidate radius exceeded the diameter without connecting")
        r *= 1.5


def critical_radius_exact(nodes, centers, algorithm: str = "auto",
                          max_pairs: int = DEFAULT_MAX_PAIRS) -> CriticalRadiusResult:
    """Exact infimum connecting radius.

    ``algorithm``: ``"prim"`` (dense, O(n) memory), ``"grid"`` (Kruskal over
    grid-restricted candidate pairs), ``"kruskal"`` (sort all n1*n2 pairs;
    above ``max_pairs`` it falls back to bisection) or ``"auto"`` (grid in
    low dimension, prim otherwise).
    """
    A, B = _points(nodes), _points(centers)
    na, nb = len(A), len(B)
    if algorithm not in ALGORITHMS:
        raise ValueError(f"algorithm must be one of {ALGORITHMS}")
    if na + nb < 2:
        raise ValueError("need at least two vertices")
    if na and nb and A.shape[1] != B.shape[1]:
        raise ValueError("nodes and centers differ in dimension")
    if not connectable(na, nb):
        return CriticalRadiusResult(math.inf, EXACT)
    if algorithm == "auto":
        algorithm = "grid" if _grid_efficient(A.shape[1], nb) else "prim"
    if algorithm == "kruskal" and na * nb > max_pairs:
        log.warning("%d pairs exceed the cap of %d; using bisection", na * nb, max_pairs)
        return critical_radius_bisection(nodes, centers, tol=1e-9 * _diameter(nodes, centers))
    fn = {"prim": bottleneck_prim, "grid": bottleneck_grid, "kruskal": bottleneck_kruskal}[algorithm]
    d2, a, b = fn(A, B)
    r = radius_from_sqdist(d2)
    return CriticalRadiusResult(r, EXACT, 0, Certificate(int(a), int(b), r))


def is_connected_at(nodes, centers, r: float) -> bool:
    """Connectivity at radius ``r`` decided from the bottleneck edge, without
    materialising the edge set."""
    A, B = _points(nodes), _points(centers)
    if len(A) + len(B) <= 1:
        return True
    if not connectable(len(A), len(B)):
        return False
    fn = bottleneck_grid if _grid_efficient(A.shape[1], len(B)) else bottleneck_prim
    d2, _, _ = fn(A, B)
    return d2 < r * r


def _wrap(s) -> PointSample:
    return s if isinstance(s, PointSample) else PointSample.given(s)


def critical_radius_bisection(nodes, centers, r_lo: float | None = None,
                              r_hi: float | None = None, tol: float = 1e-9) -> CriticalRadiusResult:
    """Bisect on the radius, testing connectivity of the built graph at each
    midpoint. Keeps ``r_lo`` disconnected and ``r_hi`` connected and returns
    ``r_hi`` once the bracket is narrower than ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    A, B = _points(nodes), _points(centers)
    if len(A) + len(B) < 2:
        raise ValueError("need at least two vertices")
    if not connectable(len(A), len(B)):
        return CriticalRadiusResult(math.inf, BISECTION)
    nodes_s, centers_s = _wrap(nodes), _wrap(centers)

    def connected(r):
        return r > 0 and component_count(build_bipartite(nodes_s, centers_s, r)) <= 1

    lo = 0.0 if r_lo is None else float(r_lo)
    if connected(lo):
        raise ValueError("graph is already connected at r_lo")
    if r_hi is None:
        hi = max(_diameter(nodes, centers), lo, tol)
        # points on the closed boundary can sit exactly one diameter apart
        while not connected(hi):
            hi *= 2.0
    else:
        hi = float(r_hi)
        if not connected(hi):
            return CriticalRadiusResult(math.inf, BISECTION)
    it = 0
    while hi - lo > tol:
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        if connected(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return CriticalRadiusResult(hi, BISECTION, it)
