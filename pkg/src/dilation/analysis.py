"""Pair dilation, average dilation and the benefit of a shortcut set.

Benefit totals are the *unnormalized* sum of per-pair dilation decreases
over unordered pairs ``u < v``; divide by ``C(n, 2)`` to get the drop in
average dilation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SameVertex
from .graph import DistanceOracle, Graph, apsp
from .metric import EPS, MetricSpace
from .shortcuts import ShortcutSet, as_shortcuts


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=8)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def upper_inverse_metric(space: MetricSpace) -> np.ndarray:
    """``1 / d_X`` on the strict upper triangle, zero elsewhere."""
    n = space.size
    inv = np.zeros((n, n))
    iu = _triu(n)
    inv[iu] = 1.0 / space.matrix[iu]
    return inv


def dilation_gain(base: np.ndarray, new: np.ndarray, inv_upper: np.ndarray) -> np.ndarray:
    """Per-pair dilation decrease when distances drop from ``base`` to ``new``.

    Decreases of at most EPS are treated as ties and contribute exactly 0.
    """
    diff = base - new
    diff[diff <= EPS] = 0.0
    return diff * inv_upper


def pair_dilation(oracle: DistanceOracle, space: MetricSpace, u: int, v: int) -> float:
    if u == v:
        raise SameVertex(f"dilation of ({u},{v}) is undefined")
    return oracle.distance(u, v) / space.distance(u, v)


@dataclass(frozen=True)
class DilationReport:
    ratios: np.ndarray  # n x n, symmetric, zero diagonal
    average: float
    maximum: float
    pair_count: int

    @property
    def per_pair(self) -> dict[tuple[int, int], float]:
        u, v = _triu(self.ratios.shape[0])
        return {(int(a), int(b)): float(r) for a, b, r in zip(u, v, self.ratios[u, v])}


def dilation_ratios(dist: np.ndarray, space: MetricSpace) -> np.ndarray:
    d = space.matrix
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(d > 0, dist / np.where(d > 0, d, 1.0), 0.0)
    return r


def average_from_dist(dist: np.ndarray, space: MetricSpace) -> float:
    n = space.size
    iu = _triu(n)
    return float(np.sum(dist[iu] / space.matrix[iu]) / pair_count(n))


def average_dilation(graph: Graph, oracle: DistanceOracle | None = None) -> DilationReport:
    if oracle is None:
        oracle = apsp(graph)
    n = graph.n
    ratios = dilation_ratios(oracle.dist, graph.space)
    upper = ratios[_triu(n)]
    return DilationReport(
        ratios=ratios,
        average=float(np.sum(upper) / pair_count(n)),
        maximum=float(upper.max()),
        pair_count=pair_count(n),
    )


@dataclass(frozen=True)
class BenefitLedger:
    gains: np.ndarray  # n x n, strict upper triangle holds b_F(u, v)
    total: float

    @property
    def per_pair(self) -> dict[tuple[int, int], float]:
        u, v = _triu(self.gains.shape[0])
        return {(int(a), int(b)): float(g) for a, b, g in zip(u, v, self.gains[u, v])}

    def pair(self, u: int, v: int) -> float:
        return float(self.gains[min(u, v), max(u, v)])

    @property
    def average_drop(self) -> float:
        return self.total / pair_count(self.gains.shape[0])


def benefit(graph: Graph, shortcuts, *, base: DistanceOracle | None = None,
            augmented: DistanceOracle | None = None) -> BenefitLedger:
    """Benefit of adding ``shortcuts`` to ``graph``, from scratch APSP runs."""
    shortcuts = as_shortcuts(graph.space, shortcuts)
    if base is None:
        base = apsp(graph)
    if augmented is None:
        augmented = apsp(graph.with_edges(shortcuts.edges))
    gains = dilation_gain(base.dist, augmented.dist, upper_inverse_metric(graph.space))
    total = float(np.sum(gains[_triu(graph.n)]))
    return BenefitLedger(gains=gains, total=total)


def benefit_total(graph: Graph, shortcuts: ShortcutSet | list) -> float:
    return benefit(graph, shortcuts).total
