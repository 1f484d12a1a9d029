"""Multi-valued bargaining solutions on finitely generated non-convex
comprehensive problems, with executable axiom checks and brute-force oracles."""

from .problem import (
    Problem,
    ProblemError,
    candidate_points,
    canonicalize,
    contains,
    hausdorff_distance,
    ideal_point,
    is_equal_ideal,
    permute,
    power,
    scale,
    star,
    symmetric_hull,
)
from .solutions import (
    SolutionResult,
    SolutionSpec,
    SpecError,
    Witness,
    confidence_spec,
    dualself_spec,
    egalitarian_spec,
    eval_objective,
    ks_spec,
    maxmin_spec,
    nash_spec,
    solution_spec,
    solve,
    utilitarian_spec,
)
from .weights import (
    ConfidenceCollection,
    ConfidenceFunction,
    WeightCollection,
    WeightError,
    WeightSet,
    confidence_collection,
    confidence_function,
    constant_confidence,
    full_simplex,
    min_confidence_over_simplex,
    min_linear_over_polytope,
    simplex_grid,
    singleton,
    symmetrize,
    uniform_weights,
    weight_collection,
    weight_set,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
