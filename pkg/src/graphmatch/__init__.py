"""Graph-matching toolkit for detecting duplicated or fabricated images.

Two images, represented by pre-extracted keypoint features, are matched as
complete graphs via a graduated softmax-Sinkhorn projected fixed-point
solver and scored with an edge+node discrepancy. A local-feature k-NN
baseline is included for comparison.
"""

from .baseline import CandidateSet, baseline_assignment, knn_candidates
from .discretize import Assignment, brute_force_match, hungarian
from .errors import InputError, NumericalError
from .features import (
    FeatureSet,
    GraphRep,
    KeyPoint,
    affinity,
    build_graph,
    feature_select,
)
from .io import load_features, parse_features, render_report, serialize_features
from .metrics import MatchReport, discrepancy, matching_error
from .pipeline import RunConfig, run_baseline, run_compare, run_gsspf, run_oracle
from .solver import (
    SolveTrace,
    SolverConfig,
    fixed_point_step,
    gradient,
    gsspf,
    objective,
    softmax_sinkhorn,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CandidateSet",
    "FeatureSet",
    "GraphRep",
    "InputError",
    "KeyPoint",
    "MatchReport",
    "NumericalError",
    "RunConfig",
    "SolveTrace",
    "SolverConfig",
    "affinity",
    "baseline_assignment",
    "brute_force_match",
    "build_graph",
    "discrepancy",
    "feature_select",
    "fixed_point_step",
    "gradient",
    "gsspf",
    "hungarian",
    "knn_candidates",
    "load_features",
    "matching_error",
    "objective",
    "parse_features",
    "render_report",
    "run_baseline",
    "run_compare",
    "run_gsspf",
    "run_oracle",
    "serialize_features",
    "softmax_sinkhorn",
]
