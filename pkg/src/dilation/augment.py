"""Greedy shortcut augmentation, an exhaustive optimum, and bound checkers.

Benefits here are unnormalized sums of per-pair dilation decreases (see
:mod:`dilation.analysis`). Candidate shortcuts are the unordered non-edges
of the current graph, always scanned in lexicographic order; among
candidates whose benefit is within EPS of the best, the first one wins.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .analysis import average_from_dist, dilation_gain, upper_inverse_metric
from .errors import DilationError, EnumerationCapExceeded, LemmaViolation
from .graph import Edge, Graph, apsp, relax_with_edge
from .metric import EPS
from .shortcuts import ShortcutSet, as_shortcuts

DEFAULT_CAP = 2_000_000
# fixed, thread-count independent partition of each candidate sweep
SWEEP_CHUNK = 64


def _set_benefit(base: np.ndarray, dist: np.ndarray, inv_upper: np.ndarray) -> float:
    return float(np.sum(dilation_gain(base, dist, inv_upper)))


def _sweep_chunk(base, current, inv_upper, metric, chunk):
    out = np.empty(len(chunk))
    for j, (u, v) in enumerate(chunk):
        new = relax_with_edge(current, u, v, metric[u, v])
        out[j] = _set_benefit(base, new, inv_upper)
    return out


def sweep_candidates(base: np.ndarray, current: np.ndarray, candidates: Sequence[Edge],
                     inv_upper: np.ndarray, metric: np.ndarray, threads: int = 1) -> np.ndarray:
    """Benefit (relative to ``base``) of ``current`` plus each single candidate."""
    chunks = [candidates[i:i + SWEEP_CHUNK] for i in range(0, len(candidates), SWEEP_CHUNK)]
    if not chunks:
        return np.empty(0)
    if threads <= 1 or len(chunks) == 1:
        parts = [_sweep_chunk(base, current, inv_upper, metric, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _sweep_chunk(base, current, inv_upper, metric, c), chunks))
    return np.concatenate(parts)


def pick_best(values: np.ndarray) -> int:
    """Index of the first value within EPS of the maximum."""
    best = values.max()
    return int(np.flatnonzero(values >= best - EPS)[0])


@dataclass(frozen=True)
class GreedyStep:
    index: int
    edge: Edge
    benefit: float
    increment: float
    average: float
    candidates: int
    seconds: float

    @property
    def flat(self) -> bool:
        return self.increment < EPS


@dataclass
class GreedyTrace:
    base_average: float
    steps: list[GreedyStep] = field(default_factory=list)
    final_shortcuts: ShortcutSet | None = None
    requested: int = 0
    truncated: bool = False  # ran out of candidate non-edges
    stopped_flat: bool = False

    def benefit_after(self, i: int) -> float:
        """B(F_i); prefixes longer than the trace return the final benefit."""
        if i <= 0 or not self.steps:
            return 0.0
        return self.steps[min(i, len(self.steps)) - 1].benefit

    def prefix(self, i: int) -> list[Edge]:
        return [s.edge for s in self.steps[:i]]

    @property
    def edges(self) -> list[Edge]:
        return [s.edge for s in self.steps]


CandidatePolicy = Callable[[Graph], list]


def greedy_augment(graph: Graph, steps: int, candidate_policy: CandidatePolicy | None = None, *,
                   threads: int = 1, stop_when_flat: bool = False) -> GreedyTrace:
    """Add up to ``steps`` shortcuts, each maximizing the benefit of the grown set.

    ``candidate_policy(current_graph)`` lists the candidate edges of one
    step; the default is every non-edge of ``G + F_{i-1}``.
    """
    if steps < 1:
        raise DilationError("steps must be at least 1")
    policy = candidate_policy or Graph.non_edges
    space = graph.space
    metric = space.matrix
    inv = upper_inverse_metric(space)
    base = apsp(graph).dist
    current = base
    cur_graph = graph
    trace = GreedyTrace(base_average=average_from_dist(base, space), requested=steps)
    chosen: list[Edge] = []
    prev = 0.0
    for i in range(1, steps + 1):
        t0 = time.perf_counter()
        cands = sorted(policy(cur_graph))
        if not cands:
            trace.truncated = True
            break
        values = sweep_candidates(base, current, cands, inv, metric, threads)
        j = pick_best(values)
        if stop_when_flat and values[j] - prev < EPS:
            trace.stopped_flat = True
            break
        u, v = cands[j]
        current = relax_with_edge(current, u, v, metric[u, v])
        cur_graph = cur_graph.with_edges([(u, v)])
        chosen.append((u, v))
        b = _set_benefit(base, current, inv)
        trace.steps.append(GreedyStep(
            index=i, edge=(u, v), benefit=b, increment=b - prev,
            average=average_from_dist(current, space), candidates=len(cands),
            seconds=time.perf_counter() - t0,
        ))
        prev = b
    trace.final_shortcuts = ShortcutSet(space, chosen)
    return trace


@dataclass(frozen=True)
class OptimalResult:
    shortcuts: ShortcutSet
    benefit: float
    subsets: int
    truncated: bool  # k exceeded the number of candidates


def optimal_augment(graph: Graph, k: int, *, cap: int = DEFAULT_CAP) -> OptimalResult:
    """Exhaustive search over all k-subsets of non-edges.

    Subsets are visited in lexicographic order with prefix distance reuse;
    a later subset replaces the incumbent only if better by more than EPS.
    """
    if k < 1:
        raise DilationError("k must be at least 1")
    space = graph.space
    metric = space.matrix
    inv = upper_inverse_metric(space)
    base = apsp(graph).dist
    cands = graph.non_edges()
    c = len(cands)
    truncated = k > c
    k = min(k, c)
    required = math.comb(c, k)
    if required > cap:
        raise EnumerationCapExceeded(required, cap)
    if k == 0:
        return OptimalResult(ShortcutSet(space), 0.0, 1, truncated)

    best_val = -math.inf
    best: tuple[int, ...] = ()
    count = 0
    picked: list[int] = []

    def walk(start: int, dist: np.ndarray) -> None:
        nonlocal best_val, best, count
        depth = len(picked)
        for idx in range(start, c - (k - depth) + 1):
            u, v = cands[idx]
            nxt = relax_with_edge(dist, u, v, metric[u, v])
            picked.append(idx)
            if depth + 1 == k:
                count += 1
                val = _set_benefit(base, nxt, inv)
                if val > best_val + EPS:
                    best_val, best = val, tuple(picked)
            else:
                walk(idx + 1, nxt)
            picked.pop()

    walk(0, base)
    return OptimalResult(ShortcutSet(space, [cands[i] for i in best]), best_val, count, truncated)


@dataclass(frozen=True)
class BoundReport:
    k: int
    greedy_benefit_at_k: float
    greedy_benefit_at_4k2: float
    optimal_benefit: float
    optimal_shortcuts: ShortcutSet
    greedy_edges: tuple[Edge, ...]
    ratio_k: float | None
    ratio_4k2: float | None
    theorem_k_satisfied: bool
    theorem_4k2_satisfied: bool
    trivial: bool

    @property
    def satisfied(self) -> bool:
        return self.theorem_k_satisfied and self.theorem_4k2_satisfied


def check_theorem_bounds(graph: Graph, k: int, *, cap: int = DEFAULT_CAP, threads: int = 1) -> BoundReport:
    """Compare greedy after k and 4k^2 steps against the exhaustive optimum."""
    opt = optimal_augment(graph, k, cap=cap)
    trace = greedy_augment(graph, 4 * k * k, threads=threads)
    b_k = trace.benefit_after(k)
    b_4k2 = trace.benefit_after(4 * k * k)
    b_opt = opt.benefit
    trivial = b_opt <= EPS
    return BoundReport(
        k=k,
        greedy_benefit_at_k=b_k,
        greedy_benefit_at_4k2=b_4k2,
        optimal_benefit=b_opt,
        optimal_shortcuts=opt.shortcuts,
        greedy_edges=tuple(trace.edges),
        ratio_k=None if trivial else b_k / b_opt,
        ratio_4k2=None if trivial else b_4k2 / b_opt,
        theorem_k_satisfied=b_k >= b_opt / (8 * k) - EPS,
        theorem_4k2_satisfied=b_4k2 >= b_opt / 2 - EPS,
        trivial=trivial,
    )


@dataclass(frozen=True)
class LemmaVerdict:
    branch: int  # 1: B(S) >= B*/2; 2: an extension gains >= B*/(8k^2)
    benefit_s: float
    optimal_benefit: float
    k: int
    witness: Edge | None = None
    witness_benefit: float | None = None

    @property
    def required_gain(self) -> float:
        return self.optimal_benefit / (8 * self.k * self.k)


def check_key_lemma(graph: Graph, shortcuts, k: int, *, optimal_benefit: float | None = None,
                    cap: int = DEFAULT_CAP) -> LemmaVerdict:
    """Check that S is half-optimal or some single edge adds B*/(8k^2).

    Raises :class:`LemmaViolation` if neither holds.
    """
    space = graph.space
    shortcuts = as_shortcuts(space, shortcuts)
    if optimal_benefit is None:
        optimal_benefit = optimal_augment(graph, k, cap=cap).benefit
    inv = upper_inverse_metric(space)
    base = apsp(graph).dist
    grown = graph.with_edges(shortcuts.edges)
    current = apsp(grown).dist
    b_s = _set_benefit(base, current, inv)
    if b_s >= optimal_benefit / 2 - EPS:
        return LemmaVerdict(1, b_s, optimal_benefit, k)
    cands = grown.non_edges()
    need = b_s + optimal_benefit / (8 * k * k) - EPS
    if cands:
        values = sweep_candidates(base, current, cands, inv, space.matrix)
        j = pick_best(values)
        if values[j] >= need:
            return LemmaVerdict(2, b_s, optimal_benefit, k, cands[j], float(values[j]))
    raise LemmaViolation(
        f"B(S) = {b_s!r} < B*/2 = {optimal_benefit / 2!r} and no single edge reaches {need!r}"
    )
