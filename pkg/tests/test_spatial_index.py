import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rghyper.spatial_index import (UniformGrid, brute_force_within, build, neighbors_within,
                                   pairs_within)


def test_empty_grid():
    g = build([], 0.1)
    assert len(g) == 0 and g.buckets == {}
    assert neighbors_within(g, (0.5, 0.5), 0.3) == []


def test_bucket_coordinates():
    g = build([(0.05, 0.05), (0.15, 0.05)], 0.1)
    assert g.buckets == {(0, 0): [0], (1, 0): [1]}


def test_bucket_invariants(rng):
    pts = rng.random((300, 3))
    g = build(pts, 0.13)
    seen = sorted(i for idx in g.buckets.values() for i in idx)
    assert seen == list(range(300))
    for cell, idx in g.buckets.items():
        for i in idx:
            assert cell == tuple(math.floor(v / 0.13) for v in pts[i])


def test_self_query_recovers_every_point(rng):
    pts = rng.random((100, 2))
    g = build(pts, 0.2)
    # strict inequality: radius 0 contains nothing, so query with a radius
    # whose square is still a positive float
    tiny = 1e-150
    assert tiny * tiny > 0
    for i, p in enumerate(pts):
        assert i in g.neighbors_within(p, tiny)
        assert g.neighbors_within(p, 0.0) == []


def test_strict_boundary():
    g = build([(0.5, 0.0)], 0.6)
    assert g.neighbors_within((0.0, 0.0), 0.6) == [0]
    assert g.neighbors_within((0.0, 0.0), 0.5) == []


def test_errors():
    with pytest.raises(ValueError):
        build([(0.0, 0.0)], 0.0)
    with pytest.raises(ValueError):
        build([(0.0, 0.0), (1.0,)], 0.1)
    g = build([(0.0, 0.0)], 0.1)
    with pytest.raises(ValueError):
        g.neighbors_within((0.0, 0.0, 0.0), 0.1)


def test_matches_brute_force_3d(rng):
    pts = rng.random((500, 3))
    g = build(pts, 0.1)
    for q in rng.random((50, 3)):
        assert g.neighbors_within(q, 0.1) == brute_force_within(pts, q, 0.1)


points_2d = st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=60)


@settings(max_examples=150, deadline=None)
@given(points_2d, st.tuples(st.floats(-5, 5), st.floats(-5, 5)), st.floats(0.01, 4),
       st.floats(0.01, 4))
def test_oracle_and_cell_width_independence(pts, q, r, w):
    expected = brute_force_within(pts, q, r)
    assert build(pts, w).neighbors_within(q, r) == expected
    assert build(pts, r).neighbors_within(q, r) == expected


@settings(max_examples=100, deadline=None)
@given(points_2d, st.floats(0.01, 3), st.floats(0, 3))
def test_radius_monotonicity(pts, r, extra):
    g = build(pts, 0.5)
    q = (0.1, -0.2)
    assert set(g.neighbors_within(q, r)) <= set(g.neighbors_within(q, r + extra))


def test_boundary_ties_on_lattice():
    # lattice points at exact distances: ties must be excluded by every path
    xs = np.arange(-3, 4) * 0.25
    pts = np.array([(x, y) for x in xs for y in xs])
    for w in (0.25, 0.1, 1.0):
        g = UniformGrid(pts, w)
        for r in (0.25, 0.5, 0.75):
            assert g.neighbors_within((0.0, 0.0), r) == brute_force_within(pts, (0.0, 0.0), r)


def _pair_set(ia, ib):
    return set(zip(ia.tolist(), ib.tolist()))


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_pairs_within_matches_brute_force(backend, rng, d):
    A, B = rng.random((300, d)), rng.random((120, d))
    r = 0.35 if d > 3 else 0.12
    diff = A[:, None, :] - B[None, :, :]
    d2 = np.zeros((300, 120))
    for k in range(d):
        d2 += diff[..., k] ** 2
    want = set(zip(*map(np.ndarray.tolist, np.nonzero(d2 < r * r))))
    ia, ib = pairs_within(A, B, r)
    assert _pair_set(ia, ib) == want
    # sorted by (centre, node)
    assert np.all(np.diff(ib * 1000 + ia) > 0)
    for w in (r / 3, 2 * r):
        assert _pair_set(*pairs_within(A, B, r, cell_width=w)) == want
    assert _pair_set(*pairs_within(A, B, r, ordered=False)) == want


def test_pairs_within_empty_inputs(backend):
    A = np.zeros((0, 2))
    ia, ib = pairs_within(A, np.ones((3, 2)), 0.5)
    assert ia.size == ib.size == 0
    ia, ib = pairs_within(np.ones((3, 2)), np.ones((3, 2)), 0.0)
    assert ia.size == 0
