"""Exception hierarchy shared by every module of the package."""

__all__ = [
    "ForestShiftError",
    "ValidationError",
    "CycleError",
    "DanglingParent",
    "BadAttach",
    "LabelClash",
    "UnknownVertex",
    "VertexSetMismatch",
    "MaskHitsRoot",
    "TooLarge",
    "PreconditionFailed",
    "InfiniteResult",
    "RaysUnsupported",
    "MissingWeight",
    "NonzeroRootWeight",
    "UnboundedWeights",
    "WindowEmpty",
    "NotSquare",
    "NotHermitian",
    "SupportForkless",
    "SearchFailed",
    "DocumentError",
]


class ForestShiftError(Exception):
    """Base class for all errors raised by :mod:`forestshift`."""


class ValidationError(ForestShiftError, ValueError):
    """Input does not describe a valid forest or weight system."""


class CycleError(ValidationError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        shown = " -> ".join(map(str, self.cycle + self.cycle[:1]))
        super().__init__(f"parent map has a non-trivial cycle: {shown}")


class DanglingParent(ValidationError):
    def __init__(self, vertex, parent):
        self.vertex, self.parent = vertex, parent
        super().__init__(f"parent {parent!r} of {vertex!r} is not a vertex of the explicit part")


class BadAttach(ValidationError):
    def __init__(self, ray, attach):
        self.ray, self.attach = ray, attach
        super().__init__(f"ray {ray!r} is attached to {attach!r}, which is not a core vertex")


class LabelClash(ValidationError):
    def __init__(self, labels):
        self.labels = sorted(map(str, labels))
        super().__init__(f"forests share labels: {', '.join(self.labels)}")


class UnknownVertex(ForestShiftError, KeyError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(vertex)

    def __str__(self):
        return f"unknown vertex {self.vertex!r}"


class VertexSetMismatch(ForestShiftError, ValueError):
    """Two forests compared by thickness do not share a vertex set."""


class MaskHitsRoot(ValidationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"thinning mask contains the root {vertex!r}")


class TooLarge(ForestShiftError):
    """An enumeration would exceed the configured cap."""


class PreconditionFailed(ForestShiftError):
    """A checked theorem was invoked outside its hypotheses."""


class InfiniteResult(ForestShiftError):
    """The requested set is infinite and cannot be listed."""


class RaysUnsupported(ForestShiftError):
    """Operation is only defined for finite forests."""


class MissingWeight(ValidationError):
    def __init__(self, what):
        self.what = what
        super().__init__(f"no weight given for {what!r}")


class NonzeroRootWeight(ValidationError):
    def __init__(self, vertex, weight):
        self.vertex, self.weight = vertex, weight
        super().__init__(f"root {vertex!s} carries nonzero weight {weight!r}")


class UnboundedWeights(ValidationError):
    """Weights are not finite numbers, so the shift cannot be bounded."""


class WindowEmpty(ForestShiftError, ValueError):
    """A truncation window without vertices was requested."""


class NotSquare(ForestShiftError, ValueError):
    pass


class NotHermitian(ForestShiftError, ValueError):
    pass


class SupportForkless(ForestShiftError):
    """No counterexample exists: the leafless support is forkless."""


class SearchFailed(ForestShiftError):
    def __init__(self, message, tried=()):
        self.tried = list(tried)
        super().__init__(message)


class DocumentError(ForestShiftError):
    """A JSON document is malformed or does not follow the document layout."""
