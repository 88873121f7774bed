"""Wave fronts from a point source in the unit-disk billiard."""

__version__ = "0.1.0"

from .analysis import (
    LengthSeries, amplitude_exponent, build_series, dominant_period, model_fit_ratio,
)
from .asymptotics import (
    ModelParams, lambda_slope, length_model_integral_alpha, length_model_integral_xi,
    length_model_series, psi,
)
from .billiard import (
    ChordGeometry, RayState, Source, chord_geometry, front_derivative, propagate_exact,
    propagate_stepped,
)
from .density import RadialRegion, model_length_in, psi_density, simulated_length_in
from .exceptions import (
    BreakpointError, DegenerateCriticalPointError, DegenerateSeriesError, DiskFrontsError,
    InsufficientDataError, QuadratureError,
)
from .stationary_phase import (
    PhaseProblem, boundary_term, brute_force, critical_points, leading_term,
    uniform_remainder_scan,
)
from .wavefront import FrontSample, PieceDecomposition, decompose, front_length, polyline_length
