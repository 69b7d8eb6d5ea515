"""Bipartite geometric graphs and the hypergraphs they induce.

A node and a hyperedge centre are joined when their distance is strictly
below the radius. Each centre induces one hyperedge: the set of nodes it
is joined to. Only the labels and memberships survive in the hypergraph.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from rghyper import _backend
from rghyper.geometry import PointSample
from rghyper.spatial_index import pairs_within


@dataclass(frozen=True, eq=False)
class BipartiteGeometricGraph:
    """Nodes, centres and the node-centre edges at ``radius``.

    Adjacency is stored CSR-style: the nodes of centre ``c`` are
    ``indices[indptr[c]:indptr[c + 1]]``, ascending.
    """

    nodes: PointSample
    centers: PointSample
    radius: float
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_centers(self) -> int:
        return len(self.centers)

    @property
    def n_edges(self) -> int:
        return int(self.indices.shape[0])

    def members(self, c: int) -> np.ndarray:
        return self.indices[self.indptr[c]:self.indptr[c + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.members(c).tolist() for c in range(self.n_centers)]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """``(node_index, center_index)`` arrays, ordered by centre then node."""
        centers = np.repeat(np.arange(self.n_centers, dtype=np.int64), np.diff(self.indptr))
        return self.indices, centers

    def node_adjacency(self) -> list[list[int]]:
        """Centres listed per node (the transposed adjacency)."""
        out = [[] for _ in range(self.n_nodes)]
        nodes, centers = self.edges()
        for j, c in zip(nodes.tolist(), centers.tolist()):
            out[j].append(c)
        return out

    def center_degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


@dataclass(frozen=True)
class Hypergraph:
    node_count: int
    hyperedges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(tuple(int(i) for i in e) for e in self.hyperedges)
        for e in edges:
            for i in e:
                if not 0 <= i < self.node_count:
                    raise ValueError(f"node index {i} outside [0, {self.node_count})")
        object.__setattr__(self, "hyperedges", edges)

    def to_text(self) -> str:
        lines = [f"nodes={self.node_count} hyperedges={len(self.hyperedges)}"]
        lines += [",".join(map(str, e)) for e in self.hyperedges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        head = dict(tok.split("=") for tok in lines[0].split())
        count, m = int(head["nodes"]), int(head["hyperedges"])
        body = lines[1:]
        if len(body) != m:
            raise ValueError(f"header announces {m} hyperedges, found {len(body)}")
        return cls(count, tuple(tuple(int(x) for x in ln.split(",")) if ln else () for ln in body))

    def to_json(self) -> str:
        return json.dumps({"node_count": self.node_count,
                           "hyperedges": [list(e) for e in self.hyperedges]})

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        data = json.loads(text)
        return cls(int(data["node_count"]), tuple(tuple(e) for e in data["hyperedges"]))


def build_bipartite(nodes: PointSample, centers: PointSample, r: float) -> BipartiteGeometricGraph:
    if not r > 0:
        raise ValueError("radius must be positive")
    if nodes.dim != centers.dim:
        raise ValueError("nodes and centers differ in dimension")
    ia, ib = pairs_within(nodes.points, centers.points, r)
    counts = np.bincount(ib, minlength=len(centers))
    indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    ia.flags.writeable = False
    indptr.flags.writeable = False
    return BipartiteGeometricGraph(nodes, centers, float(r), indptr, ia)


def to_hypergraph(g: BipartiteGeometricGraph) -> Hypergraph:
    return Hypergraph(g.n_nodes, tuple(tuple(e) for e in g.adjacency))


def _vertex_edges(g: BipartiteGeometricGraph, ignore_empty_centers: bool):
    nodes, centers = g.edges()
    n = g.n_nodes + g.n_centers
    if not ignore_empty_centers:
        return n, nodes, g.n_nodes + centers
    # drop degree-0 centres and relabel the survivors
    keep = np.flatnonzero(g.center_degrees() > 0)
    relabel = np.full(g.n_centers, -1, dtype=np.int64)
    relabel[keep] = np.arange(keep.size) + g.n_nodes
    return g.n_nodes + keep.size, nodes, relabel[centers]


def component_count(g: BipartiteGeometricGraph, ignore_empty_centers: bool = False) -> int:
    """Connected components over all nodes and centres (union-find)."""
    n, u, v = _vertex_edges(g, ignore_empty_centers)
    count, _ = _backend.kernels.uf_roots(n, u, v)
    return int(count)


def component_labels(g: BipartiteGeometricGraph) -> np.ndarray:
    """Root label per vertex; nodes first, then centres."""
    n, u, v = _vertex_edges(g, False)
    return _backend.kernels.uf_roots(n, u, v)[1]


def is_connected(g: BipartiteGeometricGraph, ignore_empty_centers: bool = False) -> bool:
    """True when the bipartite graph has at most one component.

    A centre with no nodes in range is an isolated vertex and disconnects
    the graph unless ``ignore_empty_centers`` is set.
    """
    return component_count(g, ignore_empty_centers) <= 1


def bfs_component_count(g: BipartiteGeometricGraph) -> int:
    """Component count by breadth-first search; a cross-check for union-find."""
    n1 = g.n_nodes
    adj = [[] for _ in range(n1 + g.n_centers)]
    nodes, centers = g.edges()
    for j, c in zip(nodes.tolist(), centers.tolist()):
        adj[j].append(n1 + c)
        adj[n1 + c].append(j)
    seen = [False] * len(adj)
    count = 0
    for s in range(len(adj)):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        queue = deque([s])
        while queue:
            for w in adj[queue.popleft()]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return count
