import itertools
import math

import pytest

from dilation.graph import build_graph
from dilation.metric import build_space

SQRT2 = math.sqrt(2.0)

SQUARE_TEXT = """\
DILATION-INSTANCE 1
n 4
metric euclidean 2
point 0 0 0
point 1 1 0
point 2 1 1
point 3 0 1
edges 3
edge 0 1
edge 1 2
edge 2 3
"""

A, B, C, D = 0, 1, 2, 3


@pytest.fixture
def square_space():
    return build_space([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def square(square_space):
    """Unit square A(0,0) B(1,0) C(1,1) D(0,1) joined as the path A-B-C-D."""
    return build_graph(square_space, [(A, B), (B, C), (C, D)])


@pytest.fixture
def line3():
    space = build_space([(0,), (1,), (2,)])
    return build_graph(space, [(0, 1), (1, 2)])


# ---------------------------------------------------------------------------
# Brute-force oracles, deliberately independent of the library code paths.


def plain_distance(points, i, j):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(points[i], points[j])))


def simple_paths(n, edges, u, v):
    adj = {x: set() for x in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    out = []

    def walk(path):
        last = path[-1]
        if last == v:
            out.append(list(path))
            return
        for nxt in adj[last]:
            if nxt not in path:
                path.append(nxt)
                walk(path)
                path.pop()

    walk([u])
    return out


def path_length(metric, path):
    return sum(metric[a][b] for a, b in zip(path, path[1:]))


def enumerate_shortest(metric, edges, u, v, eps=1e-9):
    """(length, canonical path) by exhaustive enumeration of simple paths.

    Canonical: shortest within eps, then fewest hops, then the
    lexicographically smallest vertex sequence read backwards from v.
    """
    paths = simple_paths(len(metric), edges, u, v)
    best = min(path_length(metric, p) for p in paths)
    tight = [p for p in paths if path_length(metric, p) <= best + eps]
    hops = min(len(p) for p in tight)
    fewest = [p for p in tight if len(p) == hops]
    return best, min(fewest, key=lambda p: p[::-1])


def fw_distances(metric, edges):
    n = len(metric)
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for a, b in edges:
        d[a][b] = d[b][a] = metric[a][b]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def brute_benefit(metric, edges, shortcuts):
    """Sum over u<v of dilation decrease, from scratch with pure-Python Floyd-Warshall."""
    n = len(metric)
    before = fw_distances(metric, edges)
    after = fw_distances(metric, list(edges) + list(shortcuts))
    return sum(
        (before[u][v] - after[u][v]) / metric[u][v]
        for u in range(n) for v in range(u + 1, n)
    )


def brute_average(metric, edges):
    n = len(metric)
    d = fw_distances(metric, edges)
    pairs = list(itertools.combinations(range(n), 2))
    return sum(d[u][v] / metric[u][v] for u, v in pairs) / len(pairs)


def non_edges(n, edges):
    present = {tuple(sorted(e)) for e in edges}
    return [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]


def brute_optimum(metric, edges, k):
    cands = non_edges(len(metric), edges)
    k = min(k, len(cands))
    return max(brute_benefit(metric, edges, s) for s in itertools.combinations(cands, k))


def metric_rows(graph):
    return graph.space.matrix.tolist()


# ---------------------------------------------------------------------------
# Acceptance summary lines, printed at the end of every run.

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
