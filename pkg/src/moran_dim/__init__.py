"""Almost-sure Phi-dimensions of random 1-variable Moran measures."""

from .errors import (
    ConstraintViolation,
    DomainError,
    InsufficientDepth,
    NoSignChange,
    TooLarge,
    UnsupportedDistribution,
    UnsupportedGeometry,
    WindowOutOfRange,
)
from .gfunction import GEvaluation, atom_yz, g_analytic, g_limits, g_monte_carlo, g_value
from .moran_sim import (
    DimensionEstimate,
    IntervalAddress,
    Realization,
    emit_intervals,
    estimate_dimension,
    extremal_branch,
    generate,
    interval_geometry,
    window_brute_force,
    window_extremal_ratio,
    zeta,
)
from .params import (
    Atom,
    Bounds,
    EssentialBounds,
    FiniteMixture,
    PointMass,
    UniformP,
    derive_L,
    essential_bounds,
    sample_level,
    two_point,
    validate,
)
from .solver import (
    CrossingResult,
    SmallPhiDims,
    find_crossing,
    similarity_dimension,
    small_phi_dims,
    twopoint_closed_form,
    uniformp_closed_form,
)

__version__ = "0.1.0"
