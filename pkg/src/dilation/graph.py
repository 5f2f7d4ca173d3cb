"""Metric-weighted undirected graphs and all-pairs shortest paths.

Shortest-path predecessors follow one canonical rule so that "the" shortest
path between two vertices is well defined: among paths of equal length
(within :data:`~dilation.metric.EPS`) the one with fewer hops wins, and
remaining ties go to the smallest predecessor id at every vertex.
"""

from __future__ import annotations

import heapq
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DilationError,
    DisconnectedGraph,
    DuplicateEdge,
    IndexOutOfRange,
    SelfLoop,
    WeightMismatch,
)
from .metric import EPS, MetricSpace

Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _components(n: int, edges: Iterable[Edge]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


class Graph:
    """Undirected graph whose edge weights are the metric distances.

    Edges are stored canonically as sorted ``(u, v)`` pairs with ``u < v``;
    weights are always read from :attr:`space`.
    """

    def __init__(self, space: MetricSpace, edges: Iterable[Edge], *, check_connected: bool = True):
        self.space = space
        self.edges: tuple[Edge, ...] = tuple(sorted(canon(u, v) for u, v in edges))
        self.edge_set = frozenset(self.edges)
        if len(self.edge_set) != len(self.edges):
            raise DuplicateEdge("duplicate edge in edge list")
        if check_connected:
            comps = self.components()
            if len(comps) > 1:
                raise DisconnectedGraph(comps)

    @property
    def n(self) -> int:
        return self.space.size

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        return self.space.distance(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return canon(u, v) in self.edge_set

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        dist = self.space.matrix
        for u, v in self.edges:
            w = float(dist[u, v])
            adj[u].append((v, w))
            adj[v].append((u, w))
        for row in adj:
            row.sort()
        return adj

    def components(self) -> list[list[int]]:
        return _components(self.n, self.edges)

    def non_edges(self) -> list[Edge]:
        """Unordered vertex pairs absent from the graph, lexicographically sorted."""
        n = self.n
        return [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in self.edge_set]

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        """The union of this graph with ``extra`` (duplicates collapse)."""
        merged = set(self.edge_set)
        for u, v in extra:
            if u == v:
                raise SelfLoop(f"self-loop ({u},{v})")
            merged.add(canon(u, v))
        return Graph(self.space, merged, check_connected=False)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(space: MetricSpace, edge_list: Sequence[Edge], *, lines: Sequence[int] | None = None) -> Graph:
    """Validate ``edge_list`` against ``space`` and build a connected graph.

    ``lines`` optionally maps each edge to a source line number used in
    error messages.
    """
    n = space.size
    seen: dict[Edge, int] = {}
    for idx, (u, v) in enumerate(edge_list):
        line = lines[idx] if lines is not None else None
        for x in (u, v):
            if not 0 <= x < n:
                raise IndexOutOfRange(f"edge ({u},{v}): vertex {x} not in [0, {n})", line=line)
        if u == v:
            raise SelfLoop(f"self-loop ({u},{v})", line=line)
        key = canon(u, v)
        if key in seen:
            raise DuplicateEdge(f"edge ({u},{v}) duplicates edge #{seen[key]}", line=line)
        seen[key] = idx
    comps = _components(n, seen)
    if len(comps) > 1:
        raise DisconnectedGraph(comps)
    return Graph(space, seen, check_connected=False)


def is_connected(graph: Graph) -> tuple[bool, list[list[int]]]:
    comps = graph.components()
    return len(comps) == 1, comps


def _dijkstra(adj: list[list[tuple[int, float]]], source: int) -> list[float]:
    dist = [float("inf")] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = [False] * len(adj)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def canonical_predecessors(graph: Graph, dist: np.ndarray) -> np.ndarray:
    """Predecessor table of the canonical shortest paths for ``dist``.

    ``pred[s, v]`` is the vertex before ``v`` on the canonical path from
    ``s``; the diagonal is ``-1``. Tight edges (``dist[s,u] + w == dist[s,v]``
    within EPS) form a DAG per source; a level-synchronous BFS on it gives
    the minimal hop count, then the smallest tight predecessor one level up
    is chosen.
    """
    n = graph.n
    idx = np.arange(n)
    if graph.m == 0:
        pred = np.full((n, n), -1, dtype=np.int64)
        return pred
    e = np.array(graph.edges, dtype=np.int64)
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    w = graph.space.matrix[src, dst]
    tight = np.abs(dist[:, src] + w - dist[:, dst]) <= EPS

    hops = np.full((n, n), -1, dtype=np.int64)
    hops[idx, idx] = 0
    level = 0
    while True:
        step = tight & (hops[:, src] == level) & (hops[:, dst] == -1)
        rows, cols = np.nonzero(step)
        if len(rows) == 0:
            break
        hops[rows, dst[cols]] = level + 1
        level += 1

    ok = tight & (hops[:, src] >= 0) & (hops[:, src] == hops[:, dst] - 1)
    rows, cols = np.nonzero(ok)
    pred = np.full((n, n), n, dtype=np.int64)
    np.minimum.at(pred, (rows, dst[cols]), src[cols])
    pred[idx, idx] = -1
    if (pred == n).any():
        s, v = map(int, np.argwhere(pred == n)[0])
        raise DilationError(f"no canonical predecessor for ({s},{v}); distances inconsistent with graph")
    return pred


class DistanceOracle:
    """Dense shortest-path distances of ``graph`` plus canonical predecessors.

    ``pred`` is derived lazily from ``dist`` and the graph's edges, so
    oracles produced by :func:`augment_distances` pay for it only when a
    path is actually reconstructed.
    """

    def __init__(self, graph: Graph, dist: np.ndarray):
        dist = np.asarray(dist, dtype=float)
        dist.setflags(write=False)
        self.graph = graph
        self.dist = dist

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def pred(self) -> np.ndarray:
        pred = canonical_predecessors(self.graph, self.dist)
        pred.setflags(write=False)
        return pred

    def distance(self, u: int, v: int) -> float:
        return float(self.dist[u, v])


def dijkstra_matrix(graph: Graph) -> np.ndarray:
    adj = graph.adjacency
    return np.array([_dijkstra(adj, s) for s in range(graph.n)])


def apsp(graph: Graph) -> DistanceOracle:
    """All-pairs shortest paths by one binary-heap Dijkstra per source."""
    d = dijkstra_matrix(graph)
    # both directions are computed independently; keep the smaller so the
    # matrix is exactly symmetric
    d = np.minimum(d, d.T)
    return DistanceOracle(graph, d)


def floyd_warshall(graph: Graph) -> np.ndarray:
    """Reference all-pairs distances (O(n^3)); used as a test oracle."""
    n = graph.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in graph.edges:
        d[u, v] = d[v, u] = graph.space.matrix[u, v]
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def relax_with_edge(dist: np.ndarray, u: int, v: int, w: float) -> np.ndarray:
    """Distances after inserting edge ``{u, v}`` of length ``w`` (fresh array)."""
    via_uv = dist[:, u, None] + w + dist[None, v, :]
    via_vu = dist[:, v, None] + w + dist[None, u, :]
    out = np.minimum(dist, np.minimum(via_uv, via_vu))
    # the two summation orders can disagree in the last bit
    return np.minimum(out, out.T)


def augment_distances(oracle: DistanceOracle, shortcut: tuple[int, int, float]) -> DistanceOracle:
    u, v, w = shortcut
    space = oracle.graph.space
    expected = space.distance(u, v)
    if abs(w - expected) > EPS:
        raise WeightMismatch(f"shortcut ({u},{v}) has weight {w!r}, metric distance is {expected!r}")
    if u == v:
        raise SelfLoop(f"self-loop ({u},{v})")
    return DistanceOracle(oracle.graph.with_edges([(u, v)]), relax_with_edge(oracle.dist, u, v, expected))
