"""Exception types raised across the package."""


class ToricError(ValueError):
    """Base class for invalid-input errors in toric computations."""


class RankMismatch(ToricError):
    pass


class HilbertBasisRequiresPointed(ToricError):
    pass


class HilbertBasisWorkLimit(ToricError):
    """The Hilbert basis enumeration exceeded its configured work bound."""


class EmptySlice(ToricError):
    pass


class OutsideCone(ToricError):
    pass


class NonPrimitiveVector(ToricError):
    pass


class NotPointed(ToricError):
    """Cones with a torus factor must be split before analysis."""


class OutsideSupport(ToricError):
    pass


class NotAProperRefinement(ToricError):
    pass


class PointQuotient(ToricError):
    """The invariant monoid is trivial, so the quotient is a point."""


class UnknownGenerator(ToricError, KeyError):
    pass


class ComplexityNotOne(ToricError):
    pass


class NotSaturated(ToricError):
    pass


class OutsideWeightCone(ToricError):
    pass


class NotProper(ToricError):
    pass


class QuotientNotAPoint(ToricError):
    pass


class NonKltBoundary(ToricError):
    pass


class AffineLocus(ToricError):
    """Graded pieces are infinite-dimensional over an affine base curve."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed; this indicates a bug."""
