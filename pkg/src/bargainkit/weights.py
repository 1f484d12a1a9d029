"""Weight vectors, weight polytopes, and log-affine confidence functions.

Weight sets are vertex-represented convex subsets of the simplex, so the
inner minimum of a linear objective is a finite vertex scan. A confidence
function is exp of a max-of-affine convex function on a support polytope
(+infinity outside the support), which makes the inner minimization of a
confidence-weighted product an exact linear program.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .lp import LPResult, lp_solve

SIMPLEX_TOL = 1e-12  # tolerance on "coordinates sum to one"
NORMALIZATION_TOL = 1e-9
_TIE_TOL = 1e-12


class WeightError(ValueError):
    """Raised when a weight structure violates an invariant."""


def as_weight(w) -> tuple[float, ...]:
    """Validate a point of the weight simplex."""
    arr = np.asarray(w, dtype=float).ravel()
    if arr.size < 2:
        raise WeightError("weights need at least two players")
    if np.any(arr < -SIMPLEX_TOL):
        raise WeightError(f"negative weight in {arr.tolist()}")
    if abs(arr.sum() - 1.0) > 1e-9:
        raise WeightError(f"weights must sum to 1, got {arr.sum()!r}")
    return tuple(float(v) for v in np.clip(arr, 0.0, None))


def permute_point(x, pi) -> tuple[float, ...]:
    """Coordinate permutation x -> (x[pi[0]], ..., x[pi[n-1]])."""
    return tuple(float(x[i]) for i in pi)


@dataclass(frozen=True)
class WeightSet:
    """Convex polytope inside the simplex, stored by its vertex list."""

    vertices: tuple[tuple[float, ...], ...]

    @property
    def n(self) -> int:
        return len(self.vertices[0])

    def points(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)


def _in_convex_hull(v, others) -> bool:
    mat = np.asarray(others, dtype=float).T
    a_eq = np.vstack([mat, np.ones((1, mat.shape[1]))])
    b_eq = np.append(np.asarray(v, dtype=float), 1.0)
    res = lp_solve(np.zeros(mat.shape[1]), a_eq=a_eq, b_eq=b_eq)
    if res.status != "optimal":
        return False
    recon = mat @ res.x
    return bool(np.max(np.abs(recon - np.asarray(v))) <= 1e-8)


def weight_set(vertices) -> WeightSet:
    """Canonicalize a vertex list: validated, deduplicated, irredundant, sorted."""
    pts = [as_weight(v) for v in vertices]
    if not pts:
        raise WeightError("weight set needs at least one vertex")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise WeightError("vertex dimension mismatch")
    uniq: list[tuple[float, ...]] = []
    for p in sorted(pts):
        if not any(max(abs(a - b) for a, b in zip(p, q)) <= _TIE_TOL for q in uniq):
            uniq.append(p)
    kept = list(uniq)
    for p in list(kept):
        others = [q for q in kept if q != p]
        if others and _in_convex_hull(p, others):
            kept.remove(p)
    return WeightSet(vertices=tuple(sorted(kept)))


def full_simplex(n: int) -> WeightSet:
    """The whole weight simplex (vertices are the unit vectors)."""
    eye = np.eye(n)
    return weight_set([tuple(row) for row in eye])


def uniform_weights(n: int) -> tuple[float, ...]:
    return tuple([1.0 / n] * n)


def singleton(w) -> WeightSet:
    return weight_set([w])


@dataclass(frozen=True)
class WeightCollection:
    """Finite collection of weight sets (the two-stage max-min structure)."""

    sets: tuple[WeightSet, ...]

    @property
    def n(self) -> int:
        return self.sets[0].n


def weight_collection(sets) -> WeightCollection:
    members = []
    for s in sets:
        members.append(s if isinstance(s, WeightSet) else weight_set(s))
    if not members:
        raise WeightError("collection needs at least one weight set")
    n = members[0].n
    if any(m.n != n for m in members):
        raise WeightError("weight set dimension mismatch")
    uniq = sorted({m.vertices for m in members})
    return WeightCollection(sets=tuple(WeightSet(v) for v in uniq))


@dataclass(frozen=True)
class ConfidenceFunction:
    """exp(max of affine pieces) on a support polytope, +infinity outside."""

    support: WeightSet
    pieces: tuple[tuple[tuple[float, ...], float], ...]  # (slope vector, intercept)

    @property
    def n(self) -> int:
        return self.support.n

    def log_value(self, w) -> float:
        w = np.asarray(w, dtype=float)
        return max(float(np.dot(a, w)) + beta for a, beta in self.pieces)


def confidence_function(support, pieces) -> ConfidenceFunction:
    sup = support if isinstance(support, WeightSet) else weight_set(support)
    norm_pieces = []
    for a, beta in pieces:
        a = tuple(float(v) for v in a)
        if len(a) != sup.n:
            raise WeightError("piece slope dimension mismatch")
        norm_pieces.append((a, float(beta)))
    if not norm_pieces:
        raise WeightError("confidence function needs at least one affine piece")
    return ConfidenceFunction(support=sup, pieces=tuple(sorted(norm_pieces)))


def constant_confidence(n: int, log_level: float = 0.0, support: WeightSet | None = None) -> ConfidenceFunction:
    """c == exp(log_level) on the support (default: the full simplex)."""
    sup = support if support is not None else full_simplex(n)
    return confidence_function(sup, [((0.0,) * n, log_level)])


@dataclass(frozen=True)
class ConfidenceCollection:
    functions: tuple[ConfidenceFunction, ...]
    symmetric: bool = False

    @property
    def n(self) -> int:
        return self.functions[0].n


def confidence_collection(functions, symmetrize_members: bool = False, normalize: bool = True) -> ConfidenceCollection:
    """Assemble a collection; optionally close under permutations and normalize."""
    funcs = list(functions)
    if not funcs:
        raise WeightError("confidence collection needs at least one function")
    n = funcs[0].n
    if any(f.n != n for f in funcs):
        raise WeightError("confidence function dimension mismatch")
    col = ConfidenceCollection(functions=tuple(funcs), symmetric=False)
    if symmetrize_members:
        col = symmetrize(col)
    if normalize:
        col, _ = normalize_collection(col)
    return col


def min_linear_over_polytope(wset: WeightSet, g) -> tuple[float, tuple[float, ...]]:
    """Minimize g.w over the polytope; the minimum sits at a vertex.

    Ties are broken toward the lexicographically smallest vertex (the vertex
    list is kept sorted, so the first minimizer wins).
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (wset.n,):
        raise WeightError(f"objective must have length {wset.n}")
    if not np.all(np.isfinite(g)):
        raise WeightError("objective must be finite")
    values = wset.points() @ g
    best = int(np.argmin(values))
    for j in range(best):
        if values[j] <= values[best] + _TIE_TOL * max(1.0, abs(values[best])):
            best = j
            break
    return float(values[best]), wset.vertices[best]


def min_confidence_over_simplex(cfun: ConfidenceFunction, g) -> tuple[float, tuple[float, ...]]:
    """Minimize log c(w) + g.w over the support polytope, exactly.

    With a single affine piece the objective is linear and a vertex scan is
    the exact optimum; otherwise the epigraph linear program
    min t + g.(sum lam_j v_j) s.t. t >= a_k.(sum lam_j v_j) + beta_k,
    lam >= 0, sum lam_j = 1 is solved with the simplex kernel.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (cfun.n,):
        raise WeightError(f"objective must have length {cfun.n}")
    if not np.all(np.isfinite(g)):
        raise WeightError("objective must be finite")
    verts = cfun.support.points()
    if len(cfun.pieces) == 1:
        a, beta = cfun.pieces[0]
        value, w = min_linear_over_polytope(cfun.support, g + np.asarray(a))
        return value + beta, w
    # Variables: [t+, t-, lam_1..lam_J]; t = t+ - t- is the epigraph level.
    njoint = len(cfun.support.vertices)
    c = np.concatenate([[1.0, -1.0], verts @ g])
    a_ub = []
    b_ub = []
    for a, beta in cfun.pieces:
        row = np.concatenate([[-1.0, 1.0], verts @ np.asarray(a)])
        a_ub.append(row)
        b_ub.append(-beta)
    a_eq = np.concatenate([[0.0, 0.0], np.ones(njoint)]).reshape(1, -1)
    res = lp_solve(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=[1.0])
    if res.status != "optimal":  # compact domain: cannot happen for valid input
        raise RuntimeError(f"inner confidence LP reported {res.status}")
    lam = res.x[2:]
    w = tuple(float(v) for v in np.clip(lam @ verts, 0.0, None))
    return float(res.value), w


def normalize_collection(col: ConfidenceCollection) -> tuple[ConfidenceCollection, int]:
    """Shift intercepts so max over functions of min over support of log c is 0.

    Returns the shifted collection and the index of the function attaining
    the max.
    """
    mins = [min_confidence_over_simplex(f, np.zeros(f.n))[0] for f in col.functions]
    top = int(np.argmax(mins))
    shift = mins[top]
    shifted = tuple(
        ConfidenceFunction(
            support=f.support,
            pieces=tuple((a, beta - shift) for a, beta in f.pieces),
        )
        for f in col.functions
    )
    return ConfidenceCollection(functions=shifted, symmetric=col.symmetric), top


def collection_normalization_residual(col: ConfidenceCollection) -> float:
    mins = [min_confidence_over_simplex(f, np.zeros(f.n))[0] for f in col.functions]
    return abs(max(mins))


def permute_weight_set(wset: WeightSet, pi) -> WeightSet:
    return weight_set([permute_point(v, pi) for v in wset.vertices])


def permute_confidence(cfun: ConfidenceFunction, pi) -> ConfidenceFunction:
    return confidence_function(
        permute_weight_set(cfun.support, pi),
        [(permute_point(a, pi), beta) for a, beta in cfun.pieces],
    )


def symmetrize(collection):
    """Close a weight or confidence collection under coordinate permutations."""
    if isinstance(collection, WeightCollection):
        n = collection.n
        members = [
            permute_weight_set(w, pi)
            for w in collection.sets
            for pi in itertools.permutations(range(n))
        ]
        return weight_collection(members)
    if isinstance(collection, ConfidenceCollection):
        n = collection.n
        seen = {}
        for f in collection.functions:
            for pi in itertools.permutations(range(n)):
                g = permute_confidence(f, pi)
                seen[(g.support.vertices, g.pieces)] = g
        funcs = [seen[key] for key in sorted(seen)]
        return ConfidenceCollection(functions=tuple(funcs), symmetric=True)
    raise WeightError(f"cannot symmetrize {type(collection).__name__}")


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """All rational simplex points (k_1/r, ..., k_n/r) with sum k_i = r."""
    if resolution < 1:
        raise WeightError("resolution must be >= 1")
    r = int(resolution)
    combos = itertools.combinations(range(r + n - 1), n - 1)
    rows = []
    for cut in combos:
        prev = -1
        counts = []
        for c in cut:
            counts.append(c - prev - 1)
            prev = c
        counts.append(r + n - 2 - prev)
        rows.append(counts)
    return np.asarray(rows, dtype=float) / r


def weights_to_json(obj) -> dict:
    """Serialize a weight structure to a CLI payload."""
    if isinstance(obj, WeightSet):
        return {"type": "weight_set", "vertices": [list(v) for v in obj.vertices]}
    if isinstance(obj, WeightCollection):
        return {
            "type": "collection",
            "sets": [[list(v) for v in s.vertices] for s in obj.sets],
        }
    if isinstance(obj, ConfidenceCollection):
        return {
            "type": "confidence",
            "functions": [
                {
                    "support": [list(v) for v in f.support.vertices],
                    "pieces": [{"a": list(a), "beta": beta} for a, beta in f.pieces],
                }
                for f in obj.functions
            ],
            "symmetrize": obj.symmetric,
        }
    raise WeightError(f"cannot serialize {type(obj).__name__}")


def weights_from_json(payload):
    """Parse a weight-structure payload (see weights_to_json for the schema)."""
    if not isinstance(payload, dict) or "type" not in payload:
        raise WeightError('weight payload must carry a "type" field')
    kind = payload["type"]
    if kind == "weight_set":
        return weight_set(payload["vertices"])
    if kind == "collection":
        return weight_collection(payload["sets"])
    if kind == "confidence":
        funcs = [
            confidence_function(
                item["support"],
                [(p["a"], p["beta"]) for p in item["pieces"]],
            )
            for item in payload["functions"]
        ]
        return confidence_collection(
            funcs, symmetrize_members=bool(payload.get("symmetrize", False))
        )
    raise WeightError(f"unknown weight payload type {kind!r}")
