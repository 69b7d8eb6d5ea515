import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rghyper.geometry import FIXED, Box, PointSample, sample
from rghyper.hypergraph import build_bipartite, is_connected
from rghyper.threshold import (BISECTION, EXACT, critical_radius_bisection,
                               critical_radius_exact, is_connected_at, radius_from_sqdist)
from rghyper.unionfind import UnionFind


def brute_bottleneck(A, B):
    """Bottleneck by checking connectivity at every distinct pair distance."""
    A, B = np.asarray(A, float), np.asarray(B, float)
    d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(-1)
    na, nb = d2.shape
    for t in np.unique(d2):
        uf = UnionFind(na + nb)
        for i, j in zip(*np.nonzero(d2 <= t)):
            uf.union(int(i), na + int(j))
        if uf.count == 1:
            return math.sqrt(t)
    raise AssertionError("unreachable")


def test_single_pair():
    res = critical_radius_exact([[0.0, 0.0]], [[0.3, 0.4]])
    assert res.r_star == pytest.approx(0.5, abs=1e-15)
    assert res.method == EXACT
    assert res.certificate.node == 0 and res.certificate.center == 0
    assert res.certificate.distance == res.r_star


def test_farther_node_governs():
    res = critical_radius_exact([[0.0], [1.0]], [[0.25]])
    assert res.r_star == 0.75
    assert res.certificate.node == 1


def test_never_connects():
    for fn in (critical_radius_exact, critical_radius_bisection):
        res = fn([[0.0, 0.0], [1.0, 1.0]], np.zeros((0, 2)))
        assert res.never_connects and res.to_dict()["r_star"] is None


def test_too_few_vertices():
    with pytest.raises(ValueError):
        critical_radius_exact([[0.0]], np.zeros((0, 1)))


def test_bisection_single_pair():
    res = critical_radius_bisection([[0.0, 0.0]], [[0.3, 0.4]], tol=1e-6)
    assert res.method == BISECTION
    assert abs(res.r_star - 0.5) <= 1e-6
    assert res.iterations > 0


def test_coincident_points():
    # node 0 sits on centre 0; node 1 needs 0.4
    nodes = [[0.2, 0.2], [0.6, 0.2]]
    centers = [[0.2, 0.2]]
    assert critical_radius_exact(nodes, centers).r_star == pytest.approx(0.4)
    assert is_connected(build_bipartite(PointSample.given([[0.2, 0.2]]),
                                        PointSample.given(centers), 1e-12))


@pytest.mark.parametrize("algorithm", ["prim", "grid", "kruskal", "auto"])
@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_algorithms_match_brute_force(backend, algorithm, d, rng):
    for _ in range(4):
        A, B = rng.random((40, d)), rng.random((15, d))
        res = critical_radius_exact(A, B, algorithm)
        assert res.r_star == pytest.approx(brute_bottleneck(A, B), rel=1e-15)
        c = res.certificate
        assert math.sqrt(((A[c.node] - B[c.center]) ** 2).sum()) == pytest.approx(res.r_star)


def test_algorithms_agree_exactly(backend):
    box = Box.unit(2)
    for seed in range(5):
        A, B = sample(box, FIXED, 800, seed), sample(box, FIXED, 200, seed + 1)
        vals = {critical_radius_exact(A, B, a).r_star for a in ("prim", "grid", "kruskal")}
        assert len(vals) == 1


def test_memory_guard_falls_back_to_bisection():
    box = Box.unit(2)
    A, B = sample(box, FIXED, 80, 1), sample(box, FIXED, 20, 2)
    res = critical_radius_exact(A, B, "kruskal", max_pairs=100)
    assert res.method == BISECTION
    exact = critical_radius_exact(A, B)
    assert abs(res.r_star - exact.r_star) <= 1e-9 * box.diameter


@pytest.mark.parametrize("seed", range(10))
def test_strictness(seed):
    box = Box.unit(2)
    A, B = sample(box, FIXED, 160, seed), sample(box, FIXED, 40, seed + 1000)
    r = critical_radius_exact(A, B).r_star
    assert not is_connected(build_bipartite(A, B, r))
    assert is_connected(build_bipartite(A, B, r + 10 * np.finfo(float).eps * box.diameter))
    assert not is_connected_at(A, B, r)


def test_radius_from_sqdist_is_largest_excluding():
    for d2 in np.random.default_rng(3).random(1000):
        r = radius_from_sqdist(d2)
        assert r * r <= d2 < math.nextafter(r, math.inf) ** 2


points = st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=12)


@settings(max_examples=80, deadline=None)
@given(points, points, st.sampled_from([0.5, 2.0, 3.0, 1e-3]))
def test_scale_equivariance(A, B, lam):
    r = critical_radius_exact(A, B).r_star
    rs = critical_radius_exact(np.multiply(A, lam), np.multiply(B, lam)).r_star
    assert rs == pytest.approx(lam * r, rel=1e-12, abs=1e-300)


@settings(max_examples=80, deadline=None)
@given(points, points, st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_adding_center_bound(A, B, c):
    # the new centre must itself be joined, so the bound is the larger of the
    # old radius and its nearest-node distance; with that distance within the
    # old radius, r_star cannot grow
    r = critical_radius_exact(A, B).r_star
    r2 = critical_radius_exact(A, B + [c]).r_star
    reach2 = min(sum((x - y) * (x - y) for x, y in zip(a, c)) for a in A)
    assert r2 <= max(r, math.sqrt(reach2)) * (1 + 1e-15)
    if reach2 < r * r:
        assert r2 <= r


@settings(max_examples=60, deadline=None)
@given(points, points)
def test_bisection_agrees(A, B):
    if len(A) + len(B) < 2:
        return
    ex = critical_radius_exact(A, B).r_star
    bi = critical_radius_bisection(A, B, tol=1e-9).r_star
    assert abs(ex - bi) <= 1e-9 + 1e-15


def test_bisection_explicit_bracket():
    A, B = [[0.0, 0.0]], [[0.3, 0.4]]
    assert critical_radius_bisection(A, B, r_hi=0.2).never_connects
    res = critical_radius_bisection(A, B, r_lo=0.1, r_hi=1.0, tol=1e-12)
    assert abs(res.r_star - 0.5) <= 1e-12
    with pytest.raises(ValueError):
        critical_radius_bisection(A, B, r_lo=0.6)
