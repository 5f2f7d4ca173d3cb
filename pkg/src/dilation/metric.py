"""Finite metric spaces over the vertex ground set ``0..n-1``."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DilationError,
    IndexOutOfRange,
    TriangleViolation,
    ZeroDistanceBetweenDistinctPoints,
)

# Absolute tolerance for every metric / distance comparison in the package.
EPS = 1e-9


def _euclidean_matrix(coords: np.ndarray) -> np.ndarray:
    n, dim = coords.shape
    acc = np.zeros((n, n))
    # fixed left-to-right accumulation over coordinates
    for c in range(dim):
        diff = coords[:, c, None] - coords[None, :, c]
        acc = acc + diff * diff
    return np.sqrt(acc)


class MetricSpace:
    """Immutable metric space with a dense distance cache.

    ``backend`` is ``"euclidean"`` (``coords`` holds an ``n x dim`` array)
    or ``"matrix"`` (``coords`` is ``None``).
    """

    __slots__ = ("backend", "coords", "_dist")

    def __init__(self, backend: str, dist: np.ndarray, coords: np.ndarray | None = None):
        dist = np.array(dist, dtype=float)
        dist.setflags(write=False)
        if coords is not None:
            coords = np.array(coords, dtype=float)
            coords.setflags(write=False)
        self.backend = backend
        self.coords = coords
        self._dist = dist

    @property
    def size(self) -> int:
        return self._dist.shape[0]

    n = size

    @property
    def dim(self) -> int | None:
        return None if self.coords is None else self.coords.shape[1]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only ``n x n`` distance matrix."""
        return self._dist

    def distance(self, i: int, j: int) -> float:
        n = self.size
        for x in (i, j):
            if not 0 <= x < n:
                raise IndexOutOfRange(f"vertex {x} not in [0, {n})")
        return float(self._dist[i, j])

    def __repr__(self) -> str:
        return f"MetricSpace(backend={self.backend!r}, n={self.size})"


def metric_distance(space: MetricSpace, i: int, j: int) -> float:
    return space.distance(i, j)


def _check_distinct(dist: np.ndarray) -> None:
    n = dist.shape[0]
    bad = np.argwhere((dist <= EPS) & ~np.eye(n, dtype=bool))
    if len(bad):
        i, j = map(int, bad[0])
        raise ZeroDistanceBetweenDistinctPoints(
            f"distance({i},{j}) = {dist[i, j]!r} for distinct points {i} != {j}"
        )


def _check_triangle(dist: np.ndarray) -> None:
    n = dist.shape[0]
    for j in range(n):
        viol = dist > dist[:, j, None] + dist[None, j, :] + EPS
        if viol.any():
            i, k = map(int, np.argwhere(viol)[0])
            raise TriangleViolation(
                f"triangle ({i},{j},{k}): d({i},{k}) = {dist[i, k]!r} > "
                f"d({i},{j}) + d({j},{k}) = {dist[i, j] + dist[j, k]!r}"
            )


def from_points(points: Sequence[Sequence[float]]) -> MetricSpace:
    coords = np.asarray(points, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    if coords.ndim != 2 or coords.shape[1] < 1:
        raise DilationError("points must be a list of equal-length coordinate vectors")
    if coords.shape[0] < 2:
        raise DilationError("a metric space needs at least 2 points")
    if not np.isfinite(coords).all():
        raise DilationError("coordinates must be finite")
    dist = _euclidean_matrix(coords)
    _check_distinct(dist)
    return MetricSpace("euclidean", dist, coords)


def from_matrix(matrix: Sequence[Sequence[float]]) -> MetricSpace:
    dist = np.asarray(matrix, dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise DilationError("distance matrix must be square")
    n = dist.shape[0]
    if n < 2:
        raise DilationError("a metric space needs at least 2 points")
    if not np.isfinite(dist).all():
        raise DilationError("distances must be finite")
    neg = np.argwhere(dist < 0)
    if len(neg):
        i, j = map(int, neg[0])
        raise DilationError(f"negative distance at ({i},{j})")
    for i in range(n):
        if abs(dist[i, i]) > EPS:
            raise DilationError(f"distance({i},{i}) = {dist[i, i]!r} is not zero")
    asym = np.argwhere(np.abs(dist - dist.T) > EPS)
    if len(asym):
        i, j = map(int, asym[0])
        raise AsymmetricMatrix(f"distance({i},{j}) = {dist[i, j]!r} but distance({j},{i}) = {dist[j, i]!r}")
    _check_distinct(dist)
    _check_triangle(dist)
    # store exactly symmetric values with an exact zero diagonal
    upper = np.triu(dist, 1)
    return MetricSpace("matrix", upper + upper.T)


def build_space(points=None, *, matrix=None) -> MetricSpace:
    """Build a validated space from a point list or an explicit matrix."""
    if (points is None) == (matrix is None):
        raise DilationError("give exactly one of points or matrix")
    if points is not None:
        return from_points(points)
    return from_matrix(matrix)
