"""Objective families and multi-valued argmax over a problem's candidate set.

All weighted-product families are evaluated in the log domain. A zero
coordinate contributes log 0 = -inf with the convention w*(-inf) = -inf for
w > 0 and 0 for w = 0, which realizes 0^0 = 1 and matches the continuous
extension of the objectives to the boundary of the orthant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .problem import Problem, candidate_points, ideal_point, strictly_dominates
from .weights import (
    ConfidenceCollection,
    WeightCollection,
    WeightError,
    WeightSet,
    min_confidence_over_simplex,
    weights_from_json,
    weights_to_json,
)

TIE_TOL = 1e-9  # relative argmax tie tolerance
_MASS_TOL = 1e-15

FAMILIES = (
    "nash",
    "kalai_smorodinsky",
    "egalitarian",
    "utilitarian",
    "maxmin_nash",
    "dualself_nash",
    "confidence_nash",
)
_WEIGHTED = {"maxmin_nash", "dualself_nash", "confidence_nash"}


class SpecError(ValueError):
    """Raised when a solution spec violates an invariant."""


@dataclass(frozen=True)
class SolutionSpec:
    family: str
    normalized: bool
    weights: WeightSet | WeightCollection | ConfidenceCollection | None = None

    def label(self) -> str:
        return self.family if self.normalized else f"{self.family}(raw)"


@dataclass(frozen=True)
class Witness:
    """Inner optimizers behind a chosen point: expert index and active weight."""

    expert: int | None
    weight: tuple[float, ...] | None


@dataclass(frozen=True)
class SolutionResult:
    chosen: tuple[tuple[float, ...], ...]
    value: float
    witnesses: tuple[Witness, ...]
    candidate_count: int

    def chosen_array(self) -> np.ndarray:
        return np.asarray(self.chosen, dtype=float)


def solution_spec(family: str, normalized: bool | None = None, weights=None) -> SolutionSpec:
    """Validate and build a solution spec.

    Kalai-Smorodinsky only exists normalized; egalitarian and utilitarian only
    exist on raw utilities; the weight-based families admit both.
    """
    if family not in FAMILIES:
        raise SpecError(f"unknown family {family!r}")
    forced = {"kalai_smorodinsky": True, "egalitarian": False, "utilitarian": False}
    if family in forced:
        if normalized is not None and normalized != forced[family]:
            raise SpecError(f"{family} requires normalized={forced[family]}")
        normalized = forced[family]
    elif normalized is None:
        normalized = True
    expected = {
        "maxmin_nash": WeightSet,
        "dualself_nash": WeightCollection,
        "confidence_nash": ConfidenceCollection,
    }
    if family in expected:
        if not isinstance(weights, expected[family]):
            raise SpecError(f"{family} requires a {expected[family].__name__}")
    elif weights is not None:
        raise SpecError(f"{family} does not take a weight structure")
    return SolutionSpec(family=family, normalized=bool(normalized), weights=weights)


def nash_spec(normalized: bool = True) -> SolutionSpec:
    return solution_spec("nash", normalized)


def ks_spec() -> SolutionSpec:
    return solution_spec("kalai_smorodinsky")


def egalitarian_spec() -> SolutionSpec:
    return solution_spec("egalitarian")


def utilitarian_spec() -> SolutionSpec:
    return solution_spec("utilitarian")


def maxmin_spec(wset: WeightSet, normalized: bool = True) -> SolutionSpec:
    return solution_spec("maxmin_nash", normalized, wset)


def dualself_spec(col: WeightCollection, normalized: bool = True) -> SolutionSpec:
    return solution_spec("dualself_nash", normalized, col)


def confidence_spec(col: ConfidenceCollection, normalized: bool = True) -> SolutionSpec:
    return solution_spec("confidence_nash", normalized, col)


def _log_matrix(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(x)


def _min_over_vertices(logs: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Row-wise min over vertices of w.log(x) under the 0*(-inf)=0 convention."""
    finite = np.where(np.isneginf(logs), 0.0, logs)
    vals = finite @ verts.T
    hits = np.isneginf(logs).astype(float) @ (verts > _MASS_TOL).T.astype(float)
    return np.where(hits > 0, -np.inf, vals).min(axis=1)


def _confidence_log_values(cfun, logs: np.ndarray) -> np.ndarray:
    verts = cfun.support.points()
    neg = np.isneginf(logs)
    finite = np.where(neg, 0.0, logs)
    hits = neg.astype(float) @ (verts > _MASS_TOL).T.astype(float)
    if len(cfun.pieces) == 1:
        a, beta = cfun.pieces[0]
        vals = finite @ verts.T + (verts @ np.asarray(a) + beta)
        return np.where(hits > 0, -np.inf, vals).min(axis=1)
    out = np.empty(len(logs))
    reach = hits.max(axis=1) > 0
    out[reach] = -np.inf
    for i in np.flatnonzero(~reach):
        out[i] = min_confidence_over_simplex(cfun, finite[i])[0]
    return out


def objective_values(spec: SolutionSpec, x: np.ndarray) -> np.ndarray:
    """Objective value at each row of x (rows already normalized if required)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise SpecError("objective inputs must be nonnegative")
    if spec.family == "nash":
        return x.prod(axis=1)
    if spec.family in ("kalai_smorodinsky", "egalitarian"):
        return x.min(axis=1)
    if spec.family == "utilitarian":
        return x.sum(axis=1)
    logs = _log_matrix(x)
    if spec.family == "maxmin_nash":
        return np.exp(_min_over_vertices(logs, spec.weights.points()))
    if spec.family == "dualself_nash":
        inner = [_min_over_vertices(logs, w.points()) for w in spec.weights.sets]
        return np.exp(np.max(inner, axis=0))
    inner = [_confidence_log_values(f, logs) for f in spec.weights.functions]
    return np.exp(np.max(inner, axis=0))


def eval_objective(spec: SolutionSpec, x) -> float:
    """Objective at a single point (already normalized for normalized specs)."""
    return float(objective_values(spec, np.asarray(x, dtype=float).reshape(1, -1))[0])


def _argmin_vertex(wset: WeightSet, logs_row: np.ndarray) -> tuple[float, tuple[float, ...]]:
    verts = wset.points()
    finite = np.where(np.isneginf(logs_row), 0.0, logs_row)
    vals = verts @ finite
    hits = (verts > _MASS_TOL) @ np.isneginf(logs_row).astype(float)
    vals = np.where(hits > 0, -np.inf, vals)
    best = int(np.argmin(vals))
    return float(vals[best]), wset.vertices[best]


def eval_with_witness(spec: SolutionSpec, x) -> tuple[float, Witness]:
    """Objective value plus the active expert/weight behind it."""
    x = np.asarray(x, dtype=float)
    if spec.family not in _WEIGHTED:
        return eval_objective(spec, x), Witness(None, None)
    logs = _log_matrix(x)
    if spec.family == "maxmin_nash":
        val, w = _argmin_vertex(spec.weights, logs)
        return math.exp(val) if val > -math.inf else 0.0, Witness(0, w)
    if spec.family == "dualself_nash":
        best_val, best_i, best_w = -math.inf, 0, None
        for i, member in enumerate(spec.weights.sets):
            val, w = _argmin_vertex(member, logs)
            if val > best_val:
                best_val, best_i, best_w = val, i, w
        return math.exp(best_val) if best_val > -math.inf else 0.0, Witness(best_i, best_w)
    best_val, best_i, best_w = -math.inf, 0, None
    for i, cfun in enumerate(spec.weights.functions):
        neg = np.isneginf(logs)
        if np.any(neg) and np.any(cfun.support.points()[:, neg] > _MASS_TOL):
            val, w = -math.inf, cfun.support.vertices[0]
        else:
            val, w = min_confidence_over_simplex(cfun, np.where(neg, 0.0, logs))
        if val > best_val:
            best_val, best_i, best_w = val, i, w
    return math.exp(best_val) if best_val > -math.inf else 0.0, Witness(best_i, best_w)


def _prepare_candidates(problem: Problem, resolution: int, candidates) -> np.ndarray:
    if candidates is None:
        return candidate_points(problem, resolution)
    arr = np.atleast_2d(np.asarray(candidates, dtype=float))
    if arr.shape[1] != problem.n:
        raise SpecError("candidate dimension mismatch")
    return np.unique(arr, axis=0)


def _tie_mask(values: np.ndarray) -> tuple[float, np.ndarray]:
    vmax = float(values.max())
    cut = vmax - TIE_TOL * abs(vmax)
    return vmax, values >= cut


def solve(problem: Problem, spec: SolutionSpec, resolution: int = 64, candidates=None) -> SolutionResult:
    """Multi-valued argmax of the spec's objective over the candidate set.

    Returns every candidate within the relative tie tolerance of the maximum,
    in lexicographic order, with the inner optimizers recorded per point.
    """
    cands = _prepare_candidates(problem, resolution, candidates)
    x = cands / ideal_point(problem) if spec.normalized else cands
    values = objective_values(spec, x)
    vmax, mask = _tie_mask(values)
    chosen_rows = cands[mask]
    witnesses = tuple(eval_with_witness(spec, row)[1] for row in x[mask])
    chosen = tuple(tuple(float(v) for v in row) for row in chosen_rows)
    return SolutionResult(
        chosen=chosen, value=vmax, witnesses=witnesses, candidate_count=len(cands)
    )


def zero_solve(problem: Problem, resolution: int = 64, candidates=None) -> SolutionResult:
    """Counterexample solution that assigns the origin to every problem."""
    origin = (0.0,) * problem.n
    return SolutionResult((origin,), 0.0, (Witness(None, None),), 1)


def dictatorship_solve(problem: Problem, player: int, resolution: int = 64, candidates=None) -> SolutionResult:
    """Counterexample solution maximizing one player's raw utility."""
    cands = _prepare_candidates(problem, resolution, candidates)
    values = cands[:, player]
    vmax, mask = _tie_mask(values)
    chosen = tuple(tuple(float(v) for v in row) for row in cands[mask])
    return SolutionResult(chosen, vmax, tuple(Witness(None, None) for _ in chosen), len(cands))


def weak_pareto_solve(problem: Problem, resolution: int = 64, candidates=None) -> SolutionResult:
    """Counterexample solution selecting all weakly Pareto optimal candidates."""
    cands = _prepare_candidates(problem, resolution, candidates)
    keep = [
        i
        for i, row in enumerate(cands)
        if not any(strictly_dominates(g, row) for g in problem.gens)
    ]
    chosen = tuple(tuple(float(v) for v in cands[i]) for i in keep)
    return SolutionResult(chosen, math.nan, tuple(Witness(None, None) for _ in chosen), len(cands))


def lexicographic_ks_solve(problem: Problem, resolution: int = 64, candidates=None) -> SolutionResult:
    """Maximal candidates under the lexicographic order on sorted normalized utilities."""
    cands = _prepare_candidates(problem, resolution, candidates)
    keys = np.sort(cands / ideal_point(problem), axis=1)
    alive = np.arange(len(cands))
    for j in range(problem.n):
        col = keys[alive, j]
        top = col.max()
        alive = alive[col >= top - TIE_TOL * max(1.0, abs(top))]
    mask = np.zeros(len(cands), dtype=bool)
    mask[alive] = True
    chosen = tuple(tuple(float(v) for v in row) for row in cands[mask])
    return SolutionResult(chosen, math.nan, tuple(Witness(None, None) for _ in chosen), len(cands))


def solution_function(spec: SolutionSpec):
    """Wrap a spec as a black-box solution F(problem, resolution, candidates)."""

    def fn(problem: Problem, resolution: int = 64, candidates=None) -> SolutionResult:
        return solve(problem, spec, resolution, candidates)

    fn.name = spec.label()
    return fn


def named_counterexamples() -> dict:
    """The five independence counterexample solutions, keyed by report name."""

    def dictator(problem, resolution=64, candidates=None):
        return dictatorship_solve(problem, 0, resolution, candidates)

    fns = {
        "zero": zero_solve,
        "utilitarian": solution_function(utilitarian_spec()),
        "dictatorship": dictator,
        "lexicographic_ks": lexicographic_ks_solve,
        "weak_pareto": weak_pareto_solve,
    }
    for name, fn in fns.items():
        fn.name = name
    return fns


def spec_to_json(spec: SolutionSpec) -> dict:
    payload = {"family": spec.family, "normalized": spec.normalized}
    if spec.weights is not None:
        payload["weights"] = weights_to_json(spec.weights)
    return payload


def spec_from_json(payload) -> SolutionSpec:
    if not isinstance(payload, dict) or "family" not in payload:
        raise SpecError('spec payload must carry a "family" field')
    weights = None
    if "weights" in payload and payload["weights"] is not None:
        weights = weights_from_json(payload["weights"])
    return solution_spec(payload["family"], payload.get("normalized"), weights)


def load_spec(path) -> SolutionSpec:
    with open(path) as fh:
        return spec_from_json(json.load(fh))


def save_spec(spec: SolutionSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_json(spec), fh, indent=2)
        fh.write("\n")
