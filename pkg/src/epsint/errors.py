"""Exception types shared across the package."""


class EpsIntError(Exception):
    """Base class."""


class DimensionMismatch(EpsIntError, ValueError):
    pass


class EmptyPolyhedron(EpsIntError, ValueError):
    pass


class PointNotInSet(EpsIntError, ValueError):
    pass


class ImproperFunction(EpsIntError, ValueError):
    """Empty effective domain (the function would be identically +inf)."""


class ImproperSum(EpsIntError, ValueError):
    """The integrand domains have empty intersection."""


class EmptySummand(EpsIntError, ValueError):
    pass


class NotInSubdifferential(EpsIntError, ValueError):
    """A query point is outside the eps-subdifferential it was claimed to be in."""


class NotEpsSubgradient(EpsIntError, ValueError):
    pass


class NotInteriorPoint(EpsIntError, ValueError):
    pass


class TheoremViolation(EpsIntError, AssertionError):
    """Both sides of a checked identity disagree; carries the counterexample."""

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class LimitExceeded(EpsIntError, ValueError):
    """Instance exceeds the desk-scale guardrails."""
