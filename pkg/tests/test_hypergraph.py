import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rghyper.geometry import FIXED, Box, PointSample, sample
from rghyper.hypergraph import (Hypergraph, bfs_component_count, build_bipartite,
                                component_count, component_labels, is_connected, to_hypergraph)


def P(points, d=2):
    pts = np.asarray(points, dtype=float).reshape(-1, d)
    box = Box((-20.0,) * d, (20.0,) * d)
    return PointSample(pts, "given", len(pts), None, box)


def test_single_edge_and_strict_boundary():
    nodes, centers = P([(0, 0)]), P([(0.5, 0)])
    assert build_bipartite(nodes, centers, 0.6).adjacency == [[0]]
    assert build_bipartite(nodes, centers, 0.5).n_edges == 0


def test_matches_brute_force_double_loop(backend, rng):
    box = Box.unit(2)
    nodes = sample(box, FIXED, 200, 1)
    centers = sample(box, FIXED, 50, 2)
    g = build_bipartite(nodes, centers, 0.1)
    expected = [[j for j in range(200)
                 if float(np.sum((nodes.points[j] - centers.points[c]) ** 2)) < 0.01]
                for c in range(50)]
    assert g.adjacency == expected


def test_errors():
    with pytest.raises(ValueError):
        build_bipartite(P([(0, 0)]), P([(1, 1)]), 0.0)
    with pytest.raises(ValueError):
        build_bipartite(P([(0, 0)]), P([(1, 1, 1)], d=3), 1.0)
    with pytest.raises(ValueError):
        Hypergraph(2, ((0, 2),))


def test_zero_centers_hypergraph():
    h = to_hypergraph(build_bipartite(P([(0, 0), (1, 1)]), P([]), 0.5))
    assert h.node_count == 2 and h.hyperedges == ()


def test_seven_node_layout():
    # nodes 1..7 from left to right, 4 centres; radius 1
    nodes = P([(0.3, 0), (5.3, 0), (4.7, 0), (9.2, 0), (10.4, 0), (10.4, 0.3), (10.4, -0.3)])
    centers = P([(0, 0), (5, 0), (10, 0), (11, 0)])
    h = to_hypergraph(build_bipartite(nodes, centers, 1.0))
    labelled = [{i + 1 for i in e} for e in h.hyperedges]
    assert labelled == [{1}, {2, 3}, {4, 5, 6, 7}, {5, 6, 7}]


def test_duplicate_hyperedges_kept():
    nodes = P([(0.01 * i, 0) for i in range(5)])
    centers = P([(0.02, 0.01), (0.02, -0.01), (0.03, 0)])
    h = to_hypergraph(build_bipartite(nodes, centers, 1.0))
    assert h.hyperedges == ((0, 1, 2, 3, 4),) * 3


def test_empty_hyperedges_kept_and_serialized():
    h = to_hypergraph(build_bipartite(P([(0, 0), (3, 3)]), P([(0.1, 0), (9, 9), (3, 3.1)]), 0.5))
    assert h.hyperedges == ((0,), (), (1,))
    assert Hypergraph.from_text(h.to_text()) == h
    assert Hypergraph.from_json(h.to_json()) == h
    assert h.to_text() == "nodes=2 hyperedges=3\n0\n\n1\n"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 12).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(0, max(n - 1, 0)), max_size=6 if n else 0)
                         .map(lambda e: sorted(set(e))), max_size=6))))
def test_serialization_round_trip(data):
    n, edges = data
    h = Hypergraph(n, tuple(map(tuple, edges)))
    assert Hypergraph.from_text(h.to_text()) == h
    assert Hypergraph.from_json(h.to_json()) == h


def test_connectivity_examples():
    assert is_connected(build_bipartite(P([(0, 0)]), P([]), 1.0))
    assert is_connected(build_bipartite(P([(0, 0), (1, 0)]), P([(0.5, 0)]), 0.6))
    assert not is_connected(build_bipartite(P([(0, 0)]), P([(2, 0)]), 1.0))
    assert component_count(build_bipartite(P([]), P([]), 1.0)) == 0
    assert component_count(build_bipartite(P([(0, 0), (5, 0), (9, 0)]), P([]), 1.0)) == 3


def test_ignore_empty_centers():
    g = build_bipartite(P([(0, 0), (1, 0)]), P([(0.5, 0), (9, 9)]), 0.6)
    assert not is_connected(g)
    assert is_connected(g, ignore_empty_centers=True)


@pytest.mark.parametrize("seed", range(8))
def test_union_find_matches_bfs(backend, seed):
    box = Box.unit(2)
    nodes = sample(box, FIXED, 150, seed)
    centers = sample(box, FIXED, 40, seed + 100)
    for r in (0.03, 0.08, 0.15, 0.3):
        g = build_bipartite(nodes, centers, r)
        assert component_count(g) == bfs_component_count(g)
        labels = component_labels(g)
        assert len(set(labels.tolist())) == component_count(g)


@pytest.mark.parametrize("seed", range(5))
def test_structural_invariants(seed):
    box = Box.unit(3)
    nodes = sample(box, FIXED, 120, seed)
    centers = sample(box, FIXED, 30, seed + 50)
    g = build_bipartite(nodes, centers, 0.25)
    adj = g.adjacency
    for lst in adj:
        assert lst == sorted(set(lst))
    by_node = g.node_adjacency()
    for c, lst in enumerate(adj):
        for j in lst:
            assert c in by_node[j]
    for j, lst in enumerate(by_node):
        for c in lst:
            assert j in adj[c]
    assert sum(len(e) for e in to_hypergraph(g).hyperedges) == g.n_edges


@pytest.mark.parametrize("seed", range(5))
def test_connectivity_monotone_in_radius(seed):
    box = Box.unit(2)
    nodes = sample(box, FIXED, 80, seed)
    centers = sample(box, FIXED, 20, seed + 7)
    radii = np.linspace(0.05, 0.8, 25)
    flags = [is_connected(build_bipartite(nodes, centers, r)) for r in radii]
    first = flags.index(True) if True in flags else len(flags)
    assert all(flags[first:])
