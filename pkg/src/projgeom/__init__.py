"""Projective Hilbert space geometry: Fubini-Study metric, stereographic
coordinates, circle atlases, discrete geodesics and geometric phase."""

__version__ = "0.1.0"

from .errors import (
    ChartDomainError,
    ConvergenceError,
    DegenerateGeodesicError,
    DimensionError,
    DomainError,
    GeometryError,
    NormalizationError,
    OffManifoldError,
    OrthogonalSegmentError,
    PoleSingularityError,
    ZeroVectorError,
)
from .hilbert import Ray, StateVector, inner_product, normalize, project_to_ray, rays_equal
from .fubini_study import (
    DiscreteCurve,
    curve_length,
    fs_distance,
    fs_line_element_sq,
    geodesic_arc,
    geodesic_interpolate,
)
from .complex_coords import bloch_map, inverse_stereographic, stereographic
from .atlas import Atlas, Chart, angular_atlas, four_chart_atlas, locate, transition
from .harmonics import LocusSpec, level_set_radius, psi_1_1, psi_1_m1
from .geodesic_opt import SolverConfig, minimize_geodesic
from .phase import ClosedLoop, pancharatnam_phase, solid_angle
