"""Exception hierarchy.

Every validation error derives from :class:`DilationError` (itself a
``ValueError``). Errors raised while parsing an instance file carry the
offending line number in ``line``.
"""

from __future__ import annotations


class DilationError(ValueError):
    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IndexOutOfRange(DilationError, IndexError):
    pass


class ZeroDistanceBetweenDistinctPoints(DilationError):
    pass


class AsymmetricMatrix(DilationError):
    pass


class TriangleViolation(DilationError):
    pass


class SelfLoop(DilationError):
    pass


class DuplicateEdge(DilationError):
    pass


class DisconnectedGraph(DilationError):
    def __init__(self, components, *, line: int | None = None):
        self.components = components
        shown = ", ".join("{" + ",".join(map(str, c)) + "}" for c in components)
        super().__init__(f"graph is disconnected: components {shown}", line=line)


class WeightMismatch(DilationError):
    pass


class SameVertex(DilationError):
    pass


class NotAnEndpoint(DilationError):
    pass


class EnumerationCapExceeded(DilationError):
    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"{required} subsets to enumerate exceeds cap {cap}")


class LemmaViolation(DilationError):
    """Neither branch of the greedy step lemma holds (an implementation bug)."""


class InstanceSyntaxError(DilationError):
    pass
