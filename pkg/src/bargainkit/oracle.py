"""Brute-force and representation cross-checks.

Two independent routes guard the solver: a direct-formula argmax oracle whose
inner minima are weight-grid scans (no logs, no linear programs), and the
constructive bisection that recovers each family's degree-1 objective from
solve() alone. The structural identities of the log transform (translation
invariance, homogeneity, concavity) are exercised numerically on seeded
samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import Problem, candidate_points, ideal_point, symmetric_hull
from .solutions import (
    SolutionResult,
    SolutionSpec,
    Witness,
    eval_objective,
    solve,
)
from .weights import simplex_grid

_CHUNK = 512
THEOREM_FAMILIES = ("nash", "kalai_smorodinsky", "maxmin_nash", "dualself_nash", "confidence_nash")


class OracleError(RuntimeError):
    """Raised when an oracle bracket or precondition fails."""


@dataclass(frozen=True)
class OracleConfig:
    problem_resolution: int = 64
    simplex_resolution: int = 64
    bisection_tol: float = 1e-6
    seed: int = 42


def _member_grid(vertices: np.ndarray, resolution: int) -> np.ndarray:
    """Grid covering a vertex-represented polytope via barycentric mixtures."""
    if len(vertices) == 1:
        return vertices.copy()
    return simplex_grid(len(vertices), resolution) @ vertices


def _grid_min_products(x: np.ndarray, wgrid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise (min over wgrid of prod x^w, argmin index), chunked.

    numpy's 0**0 == 1 realizes the boundary convention directly.
    """
    values = np.empty(len(x))
    argmins = np.empty(len(x), dtype=int)
    for lo in range(0, len(x), _CHUNK):
        chunk = x[lo : lo + _CHUNK]
        prods = np.prod(chunk[:, None, :] ** wgrid[None, :, :], axis=2)
        values[lo : lo + _CHUNK] = prods.min(axis=1)
        argmins[lo : lo + _CHUNK] = prods.argmin(axis=1)
    return values, argmins


def direct_objective_values(spec: SolutionSpec, x: np.ndarray, simplex_resolution: int) -> tuple[np.ndarray, list[Witness]]:
    """Direct-formula objective values plus grid witnesses, per row of x."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    plain = Witness(None, None)
    if spec.family == "nash":
        return x.prod(axis=1), [plain] * len(x)
    if spec.family in ("kalai_smorodinsky", "egalitarian"):
        return x.min(axis=1), [plain] * len(x)
    if spec.family == "utilitarian":
        return x.sum(axis=1), [plain] * len(x)
    if spec.family == "maxmin_nash":
        wgrid = _member_grid(spec.weights.points(), simplex_resolution)
        values, argmins = _grid_min_products(x, wgrid)
        return values, [Witness(0, tuple(wgrid[j])) for j in argmins]
    if spec.family == "dualself_nash":
        best = np.full(len(x), -np.inf)
        witnesses: list[Witness] = [plain] * len(x)
        for i, member in enumerate(spec.weights.sets):
            wgrid = _member_grid(member.points(), simplex_resolution)
            values, argmins = _grid_min_products(x, wgrid)
            for row in np.flatnonzero(values > best):
                witnesses[row] = Witness(i, tuple(wgrid[argmins[row]]))
            best = np.maximum(best, values)
        return best, witnesses
    best = np.full(len(x), -np.inf)
    witnesses = [plain] * len(x)
    for i, cfun in enumerate(spec.weights.functions):
        wgrid = _member_grid(cfun.support.points(), simplex_resolution)
        conf = np.exp([cfun.log_value(w) for w in wgrid])
        values = np.empty(len(x))
        argmins = np.empty(len(x), dtype=int)
        for lo in range(0, len(x), _CHUNK):
            chunk = x[lo : lo + _CHUNK]
            prods = conf * np.prod(chunk[:, None, :] ** wgrid[None, :, :], axis=2)
            values[lo : lo + _CHUNK] = prods.min(axis=1)
            argmins[lo : lo + _CHUNK] = prods.argmin(axis=1)
        for row in np.flatnonzero(values > best):
            witnesses[row] = Witness(i, tuple(wgrid[argmins[row]]))
        best = np.maximum(best, values)
    return best, witnesses


def brute_force_solve(problem: Problem, spec: SolutionSpec, config: OracleConfig) -> SolutionResult:
    """Independent argmax over a dense frontier grid, by direct formula."""
    cands = candidate_points(problem, config.problem_resolution)
    x = cands / ideal_point(problem) if spec.normalized else cands
    values, witnesses = direct_objective_values(spec, x, config.simplex_resolution)
    vmax = float(values.max())
    mask = values >= vmax - 1e-9 * abs(vmax)
    chosen = tuple(tuple(float(v) for v in row) for row in cands[mask])
    return SolutionResult(
        chosen=chosen,
        value=vmax,
        witnesses=tuple(w for w, keep in zip(witnesses, mask) if keep),
        candidate_count=len(cands),
    )


def _log_lipschitz_bound(spec: SolutionSpec, x: np.ndarray) -> float:
    """Bound on the log objective's gradient norm in w over the sample rows."""
    with np.errstate(divide="ignore"):
        logs = np.log(x)
    finite = np.abs(logs[np.isfinite(logs)])
    bound = float(finite.max()) if finite.size else 1.0
    if spec.family == "confidence_nash":
        bound += max(
            max(abs(v) for v in a) for f in spec.weights.functions for a, _ in f.pieces
        )
    return max(bound, 1.0)


def cross_check(problem: Problem, spec: SolutionSpec, config: OracleConfig) -> dict:
    """Compare solve() with the direct-formula oracle on one problem.

    The oracle's inner grid minimum overshoots the exact minimum by at most
    2*L/resolution, where L bounds the log objective's slope in the weights.
    """
    main = solve(problem, spec, config.problem_resolution)
    oracle = brute_force_solve(problem, spec, config)
    cands = candidate_points(problem, config.problem_resolution)
    x = cands / ideal_point(problem) if spec.normalized else cands
    lbound = _log_lipschitz_bound(spec, x)
    tol = 2.0 * lbound / config.simplex_resolution + 1e-9
    gap = abs(main.value - oracle.value)
    return {
        "value": main.value,
        "oracle_value": oracle.value,
        "gap": gap,
        "tolerance": tol,
        "lipschitz_bound": lbound,
        "ok": bool(gap <= tol),
        "chosen": [list(c) for c in main.chosen],
        "oracle_chosen": [list(c) for c in oracle.chosen],
    }


def degree_one_value(spec: SolutionSpec, x) -> float:
    """The degree-1 homogeneous representative of the spec's objective.

    Weighted-product families are already degree 1 (weights sum to one); the
    plain product is replaced by its n-th root, which shares its argmax.
    """
    x = np.asarray(x, dtype=float)
    value = eval_objective(spec, x)
    if spec.family == "nash":
        return value ** (1.0 / x.size)
    return value


def _require_theorem_family(spec: SolutionSpec) -> None:
    if spec.family not in THEOREM_FAMILIES or not spec.normalized:
        raise OracleError("representation checks need a normalized Theorem-family spec")


def membership_predicate(spec: SolutionSpec, x: np.ndarray, alpha: float) -> bool:
    """True iff alpha*1 lies in the chosen set of the symmetrized two-point
    problem scmp{x, alpha*1}.

    The argmax of a monotone objective over a comprehensive problem sits at a
    generator, so generator-only candidate sets decide membership exactly.
    """
    n = x.size
    diag = np.full(n, alpha)
    problem = symmetric_hull(np.vstack([x, diag]))
    result = solve(problem, spec, candidates=problem.points())
    chosen = result.chosen_array()
    dist = float(np.min(np.max(np.abs(chosen - diag), axis=1)))
    return dist <= 1e-9 * max(1.0, alpha)


def v_from_definition(spec: SolutionSpec, x, config: OracleConfig) -> float:
    """Recover the objective at x from solve() alone.

    Bisection on alpha over (bisection_tol, 1] for the infimum alpha whose
    equal split alpha*1 is chosen in scmp{x, alpha*1}. For a normalized family
    this infimum equals the degree-1 objective at x.
    """
    _require_theorem_family(spec)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x > 1.0 + 1e-12):
        raise OracleError("bisection domain is x in (0, 1]^n")
    hi = 1.0
    if not membership_predicate(spec, x, hi):
        raise OracleError(f"bracket failure: alpha=1 not chosen for x={x.tolist()}")
    lo = config.bisection_tol
    if membership_predicate(spec, x, lo):
        raise OracleError(f"bracket failure: alpha={lo} already chosen for x={x.tolist()}")
    while hi - lo > config.bisection_tol:
        mid = 0.5 * (lo + hi)
        if membership_predicate(spec, x, mid):
            hi = mid
        else:
            lo = mid
    return hi


def i_transform(spec: SolutionSpec, y) -> float:
    """log of the degree-1 objective at the coordinatewise exponential of y."""
    _require_theorem_family(spec)
    y = np.asarray(y, dtype=float)
    return math.log(degree_one_value(spec, np.exp(y)))


def check_translation_invariance(spec: SolutionSpec, n: int, n_samples: int = 100, seed: int = 42, tol: float = 1e-9) -> dict:
    """I(y + a*1) = I(y) + a on seeded samples with y, y + a*1 <= 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    for _ in range(n_samples):
        y = rng.uniform(-2.0, 0.0, size=n)
        a = float(rng.uniform(-1.0, 0.0))
        residual = abs(i_transform(spec, y + a) - i_transform(spec, y) - a)
        if residual > worst:
            worst, witness = residual, {"y": y.tolist(), "alpha": a}
    return {"max_residual": worst, "ok": worst <= tol, "samples": n_samples, "witness": witness}


def check_i_homogeneity(spec: SolutionSpec, n: int, n_samples: int = 100, seed: int = 42, tol: float = 1e-9) -> dict:
    """I(a*y) = a*I(y) for a in {0.5, 2, 3}; holds iff the family is built
    from plain weight sets (no confidence curvature)."""
    rng = np.random.default_rng(seed)
    factors = (0.5, 2.0, 3.0)
    worst = 0.0
    witness = None
    for i in range(n_samples):
        y = rng.uniform(-3.0, 0.0, size=n)
        a = factors[i % len(factors)]
        residual = abs(i_transform(spec, a * y) - a * i_transform(spec, y))
        if residual > worst:
            worst, witness = residual, {"y": y.tolist(), "alpha": a}
    return {"max_residual": worst, "ok": worst <= tol, "samples": n_samples, "witness": witness}


def check_i_concavity(spec: SolutionSpec, n: int, n_samples: int = 100, seed: int = 42, tol: float = 1e-9) -> dict:
    """I(lam*y + (1-lam)*y') >= lam*I(y) + (1-lam)*I(y') on seeded triples."""
    rng = np.random.default_rng(seed)
    lams = (0.25, 0.5, 0.75)
    worst = 0.0
    witness = None
    for i in range(n_samples):
        y = rng.uniform(-3.0, 0.0, size=n)
        z = rng.uniform(-3.0, 0.0, size=n)
        lam = lams[i % len(lams)]
        gap = lam * i_transform(spec, y) + (1 - lam) * i_transform(spec, z) - i_transform(
            spec, lam * y + (1 - lam) * z
        )
        if gap > worst:
            worst, witness = gap, {"y": y.tolist(), "y2": z.tolist(), "lambda": lam}
    return {"max_violation": worst, "ok": worst <= tol, "samples": n_samples, "witness": witness}
