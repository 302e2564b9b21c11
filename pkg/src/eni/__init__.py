"""Environment Navigation Incompatibility: metric, simulator, and file formats."""

__version__ = "0.1.0"

from . import envs, errors, io
from .geometry import (
    Environment,
    Point2,
    SimplePolygon,
    VisibilityPolygon,
    compute_visibility_polygon,
    difference_area,
    make_environment,
    point_in_free_space,
    polygon_area,
    rotate_about_kernel,
)
from .metric import (
    DEFAULT_ROTATIONS,
    EniResult,
    MatchRecord,
    RotationSet,
    compute_eni,
    compute_eni_from_samples,
    path_eni,
    phi,
    phi_best_rotation,
    summarize,
)
from .sampling import SampleSet, sample_points, triangulate_free_space
from .simulator import (
    AgentState,
    GainLimits,
    NavigabilityReport,
    PathPlan,
    Trace,
    apply_controller,
    navigability,
    plan_virtual_path,
    reset_to_gradient,
    simulate_path,
)

__all__ = [
    "__version__",
    "envs",
    "errors",
    "io",
    "Environment",
    "Point2",
    "SimplePolygon",
    "VisibilityPolygon",
    "compute_visibility_polygon",
    "difference_area",
    "make_environment",
    "point_in_free_space",
    "polygon_area",
    "rotate_about_kernel",
    "DEFAULT_ROTATIONS",
    "EniResult",
    "MatchRecord",
    "RotationSet",
    "compute_eni",
    "compute_eni_from_samples",
    "path_eni",
    "phi",
    "phi_best_rotation",
    "summarize",
    "SampleSet",
    "sample_points",
    "triangulate_free_space",
    "AgentState",
    "GainLimits",
    "NavigabilityReport",
    "PathPlan",
    "Trace",
    "apply_controller",
    "navigability",
    "plan_virtual_path",
    "reset_to_gradient",
    "simulate_path",
]
