"""Exception types raised across the package."""


class TropsysError(Exception):
    """Base class for all package errors."""


class InvalidInput(TropsysError, ValueError):
    """Malformed graph, divisor or function description."""


class DisconnectedGraph(InvalidInput):
    pass


class NonpositiveLength(InvalidInput):
    pass


class NonIntegralLengths(InvalidInput):
    pass


class NonIntegralSlope(InvalidInput):
    pass


class EmptySubgraph(InvalidInput):
    pass


class NotEquivalent(TropsysError):
    pass


class NotInSpan(TropsysError):
    """A function could not be reassembled from a generating set."""


class NotAVertex(TropsysError):
    pass


class NotBasePointFree(TropsysError):
    pass


class Unbalanced(TropsysError):
    pass


class NotDivisible(TropsysError):
    pass


class NotSuperstable(TropsysError):
    pass


class NotReady(TropsysError):
    pass


class TooLarge(TropsysError):
    """An enumeration exceeded its configured cap."""


class RankMismatch(TropsysError):
    """Rank differs between two subdivision levels."""
