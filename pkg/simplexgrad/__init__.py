"""simplexgrad - Simplex gradients, their error bounds, and derivative-free optimization."""

from .errors import (
    BOUND_SENTINEL,
    SimplexGradError,
    UnpoisedSetError,
    DimensionMismatchError,
    DegenerateDirectionsError,
    NonpositiveStepError,
    DegenerateRangeError,
    AsymmetricHessianError,
    DimensionTooLargeError,
    ZeroLipschitzError,
    DegenerateCandidateError,
    InfeasibleSubproblemError,
    BothSidesInfeasibleError,
    ConfigError,
    GoldenMismatchError,
)
from .geometry import (
    Hyperplane,
    ComplementPartition,
    Circumsphere,
    hyperplane_through,
    enumerate_complement_partitions,
    partition_distance,
    min_partition_distance,
    circumsphere,
    nearest_point_in_hull,
)
from .sample_set import (
    SampleSet,
    ScalingSpec,
    build_sample_set,
    ffd_set,
    rebase,
    scale_point,
    unscale_point,
)
from .gradient import (
    LinearModel,
    QuadModel,
    GradientError,
    simplex_gradient,
    linear_model,
    quadratic_model,
    gradient_error,
    error_projections,
    truncation_error_quadratic,
)
from .truncation_bounds import (
    TruncationReport,
    delta_bound,
    delta_bound_uniform,
    delta_bound_pointwise,
    radial_bound,
    radial_bound_pointwise,
    square_column_bound,
    min_vertex_bounds,
    extended_radial_bound,
    simplex_bound,
    truncation_report,
)
from .noise_bounds import (
    NoiseReport,
    NoiseRealization,
    conditioning_bound,
    lmin_bound,
    noise_error,
    worst_case_noise_error,
    noise_plane_angle,
)
from .total_bounds import (
    BoundKind,
    BoundReport,
    CandidateContext,
    total_bound_ec,
    ffd_error_bound,
    optimal_ffd_step,
    ffd_min_error_bound,
    bound_report,
    candidate_bound,
    candidate_components,
    anchor_circumcenter,
    apex_points,
    min_apex_bound,
)
from .oracle import NoiseModel, NoisyOracle
from .config import DfoConfig, Variant
from .subproblem import Side, SolverSettings, HalfSpaceSolution, solve_half_space
from .dfo import (
    DfoState,
    IterateRecord,
    IterateTrace,
    init_ffd,
    build_model_k,
    select_budget,
    step,
    run,
)

__version__ = "0.1.0"
__all__ = [
    # Errors
    "BOUND_SENTINEL",
    "SimplexGradError",
    "UnpoisedSetError",
    "DimensionMismatchError",
    "DegenerateDirectionsError",
    "NonpositiveStepError",
    "DegenerateRangeError",
    "AsymmetricHessianError",
    "DimensionTooLargeError",
    "ZeroLipschitzError",
    "DegenerateCandidateError",
    "InfeasibleSubproblemError",
    "BothSidesInfeasibleError",
    "ConfigError",
    "GoldenMismatchError",
    # Geometry
    "Hyperplane",
    "ComplementPartition",
    "Circumsphere",
    "hyperplane_through",
    "enumerate_complement_partitions",
    "partition_distance",
    "min_partition_distance",
    "circumsphere",
    "nearest_point_in_hull",
    # Sample sets
    "SampleSet",
    "ScalingSpec",
    "build_sample_set",
    "ffd_set",
    "rebase",
    "scale_point",
    "unscale_point",
    # Gradients and models
    "LinearModel",
    "QuadModel",
    "GradientError",
    "simplex_gradient",
    "linear_model",
    "quadratic_model",
    "gradient_error",
    "error_projections",
    "truncation_error_quadratic",
    # Truncation bounds
    "TruncationReport",
    "delta_bound",
    "delta_bound_uniform",
    "delta_bound_pointwise",
    "radial_bound",
    "radial_bound_pointwise",
    "square_column_bound",
    "min_vertex_bounds",
    "extended_radial_bound",
    "simplex_bound",
    "truncation_report",
    # Noise bounds
    "NoiseReport",
    "NoiseRealization",
    "conditioning_bound",
    "lmin_bound",
    "noise_error",
    "worst_case_noise_error",
    "noise_plane_angle",
    # Total and candidate bounds
    "BoundKind",
    "BoundReport",
    "CandidateContext",
    "total_bound_ec",
    "ffd_error_bound",
    "optimal_ffd_step",
    "ffd_min_error_bound",
    "bound_report",
    "candidate_bound",
    "candidate_components",
    "anchor_circumcenter",
    "apex_points",
    "min_apex_bound",
    # Optimizer
    "NoiseModel",
    "NoisyOracle",
    "DfoConfig",
    "Variant",
    "Side",
    "SolverSettings",
    "HalfSpaceSolution",
    "solve_half_space",
    "DfoState",
    "IterateRecord",
    "IterateTrace",
    "init_ffd",
    "build_model_k",
    "select_budget",
    "step",
    "run",
]
