"""Exception types shared across the package."""


class AlcoveError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(AlcoveError):
    pass


class NonUnimodular(AlcoveError):
    pass


class TooLarge(AlcoveError):
    pass


class CapExceeded(AlcoveError):
    """Raised when an enumeration would exceed its configured cap.

    Carries the number of elements found before giving up.
    """

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class InvalidRank(AlcoveError):
    pass


class NotIrreducible(AlcoveError):
    pass


class NotSemisimple(AlcoveError):
    pass


class NotAnAutomorphism(AlcoveError):
    pass


class NotReduced(AlcoveError):
    pass


class PointOutsideAlcove(AlcoveError):
    pass


class Unrecognized(AlcoveError):
    """Raised when a Cartan matrix matches no reference type.

    The offending matrix is attached for inspection.
    """

    def __init__(self, message, cartan=None):
        super().__init__(message)
        self.cartan = cartan


class NonTermination(AlcoveError):
    """Guard for iterative reductions; triggering signals a bug, not bad input."""
