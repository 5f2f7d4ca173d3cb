from __future__ import annotations

from typing import Iterable

from .errors import DuplicateEdge, IndexOutOfRange, SelfLoop
from .graph import Edge, canon
from .metric import MetricSpace


class ShortcutSet:
    """Ordered set of augmentation edges; order records insertion history."""

    def __init__(self, space: MetricSpace, edges: Iterable[Edge] = ()):
        n = space.size
        out: list[Edge] = []
        seen: set[Edge] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            for x in (u, v):
                if not 0 <= x < n:
                    raise IndexOutOfRange(f"shortcut ({u},{v}): vertex {x} not in [0, {n})")
            if u == v:
                raise SelfLoop(f"shortcut ({u},{v}) is a self-loop")
            e = canon(u, v)
            if e in seen:
                raise DuplicateEdge(f"shortcut ({u},{v}) listed twice")
            seen.add(e)
            out.append(e)
        self.space = space
        self.edges: tuple[Edge, ...] = tuple(out)
        self.edge_set = frozenset(out)
        self.endpoints = frozenset(x for e in out for x in e)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e) -> bool:
        return canon(*e) in self.edge_set

    def weight(self, u: int, v: int) -> float:
        return self.space.distance(u, v)

    def weighted(self) -> list[tuple[int, int, float]]:
        return [(u, v, self.space.distance(u, v)) for u, v in self.edges]

    def added(self, e: Edge) -> "ShortcutSet":
        return ShortcutSet(self.space, self.edges + (e,))

    def __eq__(self, other) -> bool:
        return isinstance(other, ShortcutSet) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"ShortcutSet({list(self.edges)})"


def as_shortcuts(space: MetricSpace, shortcuts) -> ShortcutSet:
    if isinstance(shortcuts, ShortcutSet):
        return shortcuts
    return ShortcutSet(space, shortcuts)
