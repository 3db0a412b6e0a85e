"""Street-distance distributions on Poisson line Cox networks.

Points live on a random street system (a Poisson line process) and travel
along streets with a budget on how many corners they may turn. This package
evaluates the resulting shortest-distance distributions in closed or
quadrature form, estimates them exactly by simulation, and applies them to
link-budget and reachability questions.
"""

from .analytic import (
    DEFAULT_VARIANT,
    IntersectionVariant,
    angle_thresholds,
    cdf_naive_recursion,
    cdf_one_turn_intersection,
    cdf_one_turn_point,
    cdf_ppp2d_reference,
    cdf_two_turn_bound,
    cdf_upper_intersection,
    cdf_zero_turn_intersection,
    equivalent_ppp_density,
    one_turn_intersection_terms,
    two_turn_T,
    z_length,
)
from .applications import (
    RisLinkParams,
    db_to_linear,
    farfield_success_lower_bound,
    farfield_threshold_distance,
    nearfield_success,
    nearfield_threshold_distance,
    reach_quantile,
)
from .errors import (
    BudgetExhausted,
    DegenerateAngles,
    DomainError,
    GridMismatch,
    LineCoxError,
    NegativeIntensity,
    NegativeT,
    NoBracket,
    NonFinite,
    NonPositiveParameter,
    NonPositiveRadius,
    NonPositiveScale,
    PolicyBudgetNegative,
    QuadratureFailure,
    TBeyondClip,
    UnknownLine,
    ZeroMu,
)
from .experiments import (
    ComparisonReport,
    EcdfEstimate,
    SweepSpec,
    compare,
    default_grid,
    dkw_halfwidth,
    figure_sweep,
    run_mc,
)
from .model import (
    AngleLaw,
    DistributionCurve,
    Line,
    ModelParams,
    PalmKind,
    PalmScenario,
    PointOnLine,
    PolicyKind,
    TurnPolicy,
    rescale,
    typical_intersection,
    typical_point,
    validate,
)
from .oracle import (
    PathResult,
    route_length,
    route_positions,
    sample_D,
    sample_path,
    shortest_path,
)
from .quadrature import QuadSpec, gauss_legendre, integrate_1d, integrate_nested
from .sampler import (
    Realization,
    crossings_within,
    realization_from_json,
    realization_to_json,
    rotate,
    sample_palm,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "ModelParams", "validate", "Line", "PointOnLine", "PalmKind", "AngleLaw",
    "PalmScenario", "typical_point", "typical_intersection", "PolicyKind",
    "TurnPolicy", "DistributionCurve", "rescale",
    # analytic
    "cdf_one_turn_point", "cdf_naive_recursion", "cdf_zero_turn_intersection",
    "cdf_upper_intersection", "cdf_one_turn_intersection",
    "one_turn_intersection_terms", "cdf_two_turn_bound", "two_turn_T",
    "cdf_ppp2d_reference", "equivalent_ppp_density", "IntersectionVariant",
    "DEFAULT_VARIANT", "angle_thresholds", "z_length",
    # sampling and oracle
    "Realization", "sample_palm", "crossings_within", "realization_to_json",
    "realization_from_json", "rotate", "PathResult", "shortest_path",
    "sample_path", "sample_D", "route_positions", "route_length",
    # experiments
    "EcdfEstimate", "run_mc", "compare", "ComparisonReport", "SweepSpec",
    "figure_sweep", "default_grid", "dkw_halfwidth",
    # applications
    "RisLinkParams", "nearfield_threshold_distance", "nearfield_success",
    "farfield_threshold_distance", "farfield_success_lower_bound",
    "reach_quantile", "db_to_linear",
    # quadrature
    "QuadSpec", "integrate_1d", "integrate_nested", "gauss_legendre",
    # errors
    "LineCoxError", "NonFinite", "NegativeIntensity", "ZeroMu",
    "NonPositiveScale", "NegativeT", "NonPositiveParameter",
    "NonPositiveRadius", "UnknownLine", "TBeyondClip", "PolicyBudgetNegative",
    "DegenerateAngles", "DomainError", "QuadratureFailure", "BudgetExhausted",
    "GridMismatch", "NoBracket",
]
