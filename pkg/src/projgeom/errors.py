"""Exception hierarchy shared by every module of the package."""


class GeometryError(ValueError):
    """Base class for all domain errors raised by projgeom."""

    kind = "geometry"


class DimensionError(GeometryError):
    kind = "dimension"


class ZeroVectorError(GeometryError):
    kind = "zero_vector"


class NormalizationError(GeometryError):
    kind = "normalization"


class DegenerateGeodesicError(GeometryError):
    kind = "degenerate_geodesic"


class PoleSingularityError(GeometryError):
    kind = "pole_singularity"


class ChartDomainError(GeometryError):
    kind = "chart_domain"


class OffManifoldError(GeometryError):
    kind = "off_manifold"


class OrthogonalSegmentError(GeometryError):
    kind = "orthogonal_segment"


class DomainError(GeometryError):
    kind = "domain"


class ConvergenceError(GeometryError):
    """The geodesic solver ran out of iterations.

    ``gradient_norm`` holds the max-norm of the gradient at the last iterate.
    """

    kind = "convergence"

    def __init__(self, message: str, gradient_norm: float):
        super().__init__(message)
        self.gradient_norm = gradient_norm
