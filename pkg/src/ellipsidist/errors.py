"""Exception hierarchy.

The CLI maps the two middle layers onto exit codes: ``MathematicalRejection``
exits 3 and ``NumericFailure`` exits 4.
"""


class EllipsiError(Exception):
    """Base class for every error raised by this package."""


class MathematicalRejection(EllipsiError):
    """Input is well formed but mathematically unacceptable."""


class NumericFailure(EllipsiError):
    """A numerical routine failed to reach its accuracy target."""


class SingularCurveError(MathematicalRejection):
    pass


class PointNotOnCurveError(MathematicalRejection):
    pass


class BackendError(MathematicalRejection):
    """Operation needs the exact rational backend (or received mixed types)."""


class PointOnBoundedComponentError(MathematicalRejection):
    pass


class SeedNotEquidistributedError(MathematicalRejection):
    """Raised when a verdict is requested for a torsion seed."""


class PoleProximityError(NumericFailure):
    """Elliptic-log argument sits within ``pole_tol`` of a lattice point."""


class QuadratureError(NumericFailure):
    pass


class NumericOverflowError(NumericFailure):
    pass
