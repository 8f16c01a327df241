"""Exception types raised by the toolkit.

Every mathematical failure derives from :class:`MathError` so that front ends
can map it to a single exit status; malformed input raises
:class:`ProblemParseError` instead.
"""


class MathError(Exception):
    """Base class for errors that come from the mathematics, not the input format."""


class NonSmoothCone(MathError):
    """A cone whose generators do not extend to a basis of the lattice."""


class PointOutsideDualCone(MathError):
    """A point that pairs negatively with some generator of the cone."""


class EmptyRegion(MathError):
    """The convex region has no points."""


class UnboundedRegion(MathError):
    """An enumeration was requested on an unbounded region without a bounding box."""


class BoundaryAmbiguous(MathError):
    """A point lies within tolerance of a curved boundary, so strictness cannot be decided."""


class UnsupportedDimension(MathError):
    """The algorithm is only certified in lower dimension."""


class IncompleteFan(MathError):
    """The maximal cones of a planar fan do not cover the plane."""


class NefViolation(MathError):
    """The twisted class at the chosen lattice point is not nef."""


class NotBig(MathError):
    """The line bundle is not big, so the requested invariant is not defined."""


class ZeroFunction(MathError):
    """A holomorphic function with no monomials was supplied."""


class InconsistentCalibration(MathError):
    """The (class, matrix) pairs do not determine a linear assignment of hermitian forms."""


class NoSections(MathError):
    """The scaled region contains no lattice points."""


class ProblemParseError(ValueError):
    """The problem document is malformed."""
