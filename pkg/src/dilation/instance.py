"""Plain-text instance files and seeded random instance generators.

Grammar (``#`` lines and blank lines are ignored)::

    DILATION-INSTANCE 1
    n <int>
    metric euclidean <dim>        |  metric matrix
    point <i> <c1> ... <cdim>     |  row <i> <v1> ... <vn>      (n lines)
    edges <m>
    edge <u> <v>                                                (m lines)

Generators draw from numpy's PCG64 bit generator seeded with the given
integer; PCG64 output is specified bit-for-bit, so instances are identical
across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DilationError, InstanceSyntaxError
from .graph import Edge, Graph, build_graph
from .metric import MetricSpace, from_matrix, from_points

HEADER = "DILATION-INSTANCE"
VERSION = 1
MODELS = ("uniform-square", "path", "random-tree")


@dataclass(frozen=True)
class Instance:
    space: MetricSpace
    graph: Graph

    @property
    def n(self) -> int:
        return self.space.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        a, b = self.space, other.space
        if a.backend != b.backend or self.graph.edges != other.graph.edges:
            return False
        if a.backend == "euclidean":
            return np.array_equal(a.coords, b.coords)
        return np.array_equal(a.matrix, b.matrix)


def fmt(x: float) -> str:
    """Shortest repr that round-trips the double exactly."""
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _at_line(exc: DilationError, line: int) -> DilationError:
    exc.line = line
    exc.args = (f"line {line}: {exc.args[0]}",) + exc.args[1:]
    return exc


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceSyntaxError(f"{what}: expected an integer, got {tok!r}", line=lineno) from None


def _float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise InstanceSyntaxError(f"expected a number, got {tok!r}", line=lineno) from None
    if not math.isfinite(x):
        raise InstanceSyntaxError(f"non-finite number {tok!r}", line=lineno)
    return x


def parse_instance(text: str) -> Instance:
    rows = _tokens(text)

    def take(expect: str):
        try:
            lineno, toks = next(rows)
        except StopIteration:
            raise InstanceSyntaxError(f"unexpected end of file, expected {expect!r}") from None
        if toks[0] != expect:
            raise InstanceSyntaxError(f"expected {expect!r}, got {toks[0]!r}", line=lineno)
        return lineno, toks

    lineno, toks = take(HEADER)
    if len(toks) != 2 or toks[1] != str(VERSION):
        raise InstanceSyntaxError(f"unsupported header {' '.join(toks)!r}; expected '{HEADER} {VERSION}'", line=lineno)

    lineno, toks = take("n")
    if len(toks) != 2:
        raise InstanceSyntaxError("expected 'n <int>'", line=lineno)
    n = _int(toks[1], lineno, "n")
    if n < 2:
        raise InstanceSyntaxError(f"n = {n}; need at least 2 points", line=lineno)

    lineno, toks = take("metric")
    metric_line = lineno
    if len(toks) == 3 and toks[1] == "euclidean":
        dim = _int(toks[2], lineno, "dimension")
        if dim < 1:
            raise InstanceSyntaxError(f"dimension {dim} < 1", line=lineno)
        kind, width = "point", dim
    elif len(toks) == 2 and toks[1] == "matrix":
        kind, width = "row", n
    else:
        raise InstanceSyntaxError("expected 'metric euclidean <dim>' or 'metric matrix'", line=lineno)

    values = []
    for i in range(n):
        lineno, toks = take(kind)
        if len(toks) != width + 2:
            raise InstanceSyntaxError(f"{kind} row needs an index and {width} values", line=lineno)
        if _int(toks[1], lineno, f"{kind} index") != i:
            raise InstanceSyntaxError(f"expected {kind} {i}, got {kind} {toks[1]}", line=lineno)
        values.append([_float(t, lineno) for t in toks[2:]])

    try:
        space = from_points(values) if kind == "point" else from_matrix(values)
    except DilationError as exc:
        raise _at_line(exc, metric_line)

    lineno, toks = take("edges")
    if len(toks) != 2:
        raise InstanceSyntaxError("expected 'edges <m>'", line=lineno)
    m = _int(toks[1], lineno, "edge count")
    if m < 0:
        raise InstanceSyntaxError(f"negative edge count {m}", line=lineno)
    edges_line = lineno
    edges: list[Edge] = []
    lines: list[int] = []
    for _ in range(m):
        lineno, toks = take("edge")
        if len(toks) != 3:
            raise InstanceSyntaxError("expected 'edge <u> <v>'", line=lineno)
        edges.append((_int(toks[1], lineno, "u"), _int(toks[2], lineno, "v")))
        lines.append(lineno)
    extra = next(rows, None)
    if extra is not None:
        raise InstanceSyntaxError(f"unexpected trailing content {extra[1][0]!r}", line=extra[0])
    try:
        graph = build_graph(space, edges, lines=lines)
    except DilationError as exc:
        if exc.line is None:
            raise _at_line(exc, edges_line)
        raise
    return Instance(space, graph)


def emit_instance(inst: Instance, comment: str | None = None) -> str:
    space, graph = inst.space, inst.graph
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{HEADER} {VERSION}")
    out.append(f"n {space.size}")
    if space.backend == "euclidean":
        out.append(f"metric euclidean {space.dim}")
        for i, row in enumerate(space.coords):
            out.append(f"point {i} " + " ".join(fmt(c) for c in row))
    else:
        out.append("metric matrix")
        for i, row in enumerate(space.matrix):
            out.append(f"row {i} " + " ".join(fmt(c) for c in row))
    out.append(f"edges {graph.m}")
    out.extend(f"edge {u} {v}" for u, v in graph.edges)
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as f:
        return parse_instance(f.read())


def write_instance(inst: Instance, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(emit_instance(inst, comment))


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_tree_edges(n: int, rng: np.random.Generator) -> list[Edge]:
    """Uniform random labelled tree on ``n`` vertices (Pruefer decoding)."""
    if n == 2:
        return [(0, 1)]
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(i for i in range(n) if degree[i] == 1)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def generate_instance(model: str, n: int, seed: int, *, collinear: bool = False) -> Instance:
    """Deterministic random instance for ``(model, n, seed)``.

    ``collinear`` places point ``i`` at coordinate ``i`` on a line instead
    of drawing it from the unit square.
    """
    if model not in MODELS:
        raise DilationError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    if n < 2:
        raise DilationError("n must be at least 2")
    rng = rng_for(seed)
    if collinear:
        points = np.arange(n, dtype=float)[:, None]
    else:
        points = rng.random((n, 2))
    space = from_points(points)

    if model == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        edges = random_tree_edges(n, rng)
        if model == "uniform-square":
            present = set(edges)
            free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
            extra = min(math.ceil(n / 2), len(free))
            picks = rng.choice(len(free), size=extra, replace=False) if extra else []
            edges += [free[int(i)] for i in sorted(picks)]
    return Instance(space, build_graph(space, edges))


def complete_instance(space: MetricSpace) -> Instance:
    n = space.size
    return Instance(space, build_graph(space, [(u, v) for u in range(n) for v in range(u + 1, n)]))
