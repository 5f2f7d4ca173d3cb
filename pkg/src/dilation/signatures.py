"""Signatures of vertex pairs with respect to a shortcut set.

The signature of a pair ``u < v`` is read off the canonical shortest path
from ``u`` to ``v`` in ``G + F``: ``None`` if the path uses no shortcut,
otherwise ``(first endpoint of the first shortcut traversed, last endpoint
of the last shortcut traversed)``. Grouping the benefit by signature
partitions it exactly; :func:`benefit_decomposition` checks that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import BenefitLedger, benefit
from .errors import DilationError, NotAnEndpoint, SameVertex
from .graph import DistanceOracle, Graph, apsp
from .metric import EPS
from .shortcuts import ShortcutSet, as_shortcuts

__all__ = [
    "ShortcutSet",
    "canonical_shortest_path",
    "signature",
    "signature_map",
    "restricted_benefit",
    "benefit_decomposition",
    "Decomposition",
]


def canonical_shortest_path(oracle: DistanceOracle, u: int, v: int) -> list[int]:
    if u == v:
        raise SameVertex(f"no path needed from {u} to itself")
    pred = oracle.pred
    path = [v]
    x = v
    while x != u:
        x = int(pred[u, x])
        if x < 0 or len(path) > oracle.n:
            raise DilationError(f"predecessor table does not lead from {v} back to {u}")
        path.append(x)
    path.reverse()
    return path


def _path_signature(path: list[int], shortcuts: ShortcutSet):
    first = last = None
    for a, b in zip(path, path[1:]):
        if (a, b) in shortcuts:
            if first is None:
                first = a
            last = b
    return None if first is None else (first, last)


def signature(graph: Graph, shortcuts, u: int, v: int, *, oracle: DistanceOracle | None = None):
    """Signature of the pair ``{u, v}``, traversed from the smaller id."""
    if u == v:
        raise SameVertex(f"signature of ({u},{v}) is undefined")
    shortcuts = as_shortcuts(graph.space, shortcuts)
    if oracle is None:
        oracle = apsp(graph.with_edges(shortcuts.edges))
    u, v = min(u, v), max(u, v)
    return _path_signature(canonical_shortest_path(oracle, u, v), shortcuts)


def signature_map(graph: Graph, shortcuts, *, oracle: DistanceOracle | None = None) -> dict:
    """``{(u, v): signature}`` for every pair ``u < v``."""
    shortcuts = as_shortcuts(graph.space, shortcuts)
    if oracle is None:
        oracle = apsp(graph.with_edges(shortcuts.edges))
    n = graph.n
    return {
        (u, v): _path_signature(canonical_shortest_path(oracle, u, v), shortcuts)
        for u in range(n)
        for v in range(u + 1, n)
    }


@dataclass
class Decomposition:
    shortcuts: ShortcutSet
    ledger: BenefitLedger
    signatures: dict
    classes: dict = field(default_factory=dict)  # signature -> restricted benefit
    none_contribution: float = 0.0

    @property
    def total(self) -> float:
        return self.ledger.total

    @property
    def decomposed_total(self) -> float:
        return float(sum(self.classes[s] for s in sorted(self.classes)))

    @property
    def residual(self) -> float:
        return abs(self.decomposed_total - self.total)

    @property
    def nonzero(self) -> dict:
        return {s: b for s, b in self.classes.items() if b != 0.0}

    def restricted(self, a: int, b: int) -> float:
        return self.classes.get((a, b), 0.0)

    def holds(self, tol: float | None = None) -> bool:
        n = self.ledger.gains.shape[0]
        tol = n * n * EPS if tol is None else tol
        return self.residual <= tol and self.none_contribution == 0.0


def benefit_decomposition(graph: Graph, shortcuts) -> Decomposition:
    shortcuts = as_shortcuts(graph.space, shortcuts)
    if not len(shortcuts):
        raise DilationError("decomposition needs at least one shortcut")
    base = apsp(graph)
    oracle = apsp(graph.with_edges(shortcuts.edges))
    ledger = benefit(graph, shortcuts, base=base, augmented=oracle)
    sigs = signature_map(graph, shortcuts, oracle=oracle)
    classes: dict = {}
    none_total = 0.0
    for (u, v), sig in sigs.items():
        g = float(ledger.gains[u, v])
        if sig is None:
            none_total += g
        else:
            classes[sig] = classes.get(sig, 0.0) + g
    return Decomposition(shortcuts, ledger, sigs, classes, none_total)


def restricted_benefit(graph: Graph, shortcuts, a: int, b: int) -> float:
    shortcuts = as_shortcuts(graph.space, shortcuts)
    if a == b:
        raise SameVertex(f"restricted benefit of ({a},{b}) is undefined")
    for x in (a, b):
        if x not in shortcuts.endpoints:
            raise NotAnEndpoint(f"vertex {x} is not an endpoint of any shortcut")
    return benefit_decomposition(graph, shortcuts).restricted(a, b)

