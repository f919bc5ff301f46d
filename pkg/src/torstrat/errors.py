"""Exceptions raised by the stratification engine.

Two families matter for the CLI exit codes: input/validation problems
(exit 2) and computation failures where an algorithm cannot certify its
result (exit 3).  Everything derives from TorstratError.
"""


class TorstratError(Exception):
    """Base class for all engine errors."""


class InputError(TorstratError):
    """Malformed or inconsistent input data."""


class NotDivisible(TorstratError):
    """Exact polynomial division failed: the dividend is not in the ideal."""


class NotSplit(TorstratError):
    """A homogeneous polynomial is not a product of rational linear forms."""


class NotFree(TorstratError):
    """Graph cohomology is not a free module of rank |vertices|."""


class Disconnected(TorstratError):
    """The input graph is not connected."""


class NonSplit(TorstratError):
    """A localized algebra could not be certifiably split into blocks."""


class NotStrict(TorstratError):
    """The supplied system is not a strict Thom system."""


class NotFound(TorstratError):
    """A degree-bounded search exhausted its budget without a result."""


class NotUnique(TorstratError):
    """A node has no unique maximal ramified element below it."""


class SubtorusNotContained(TorstratError):
    """An inclusion test was asked for subtori without containment."""


class NotContained(TorstratError):
    """Restriction requested between incomparable strata."""


class NotIsolated(TorstratError):
    """Stratum cohomology requires isolated fixed points."""


class NoWeights(TorstratError):
    """No candidate weights are available for the requested operation."""


class NotCoprime(TorstratError):
    """Euler factorization met repeated non-proportional scalar factors."""
