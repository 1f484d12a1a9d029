"""Finitely generated comprehensive bargaining problems.

A problem is the comprehensive hull of a finite set of nonnegative utility
vectors: the union of the boxes [0, g] over its generators. Generators are
kept in canonical form (a lexicographically sorted Pareto antichain), so two
problems are equal iff their generator tuples are equal.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

# Relative tolerance for dominance ties, equal-ideal tests and membership.
EQ_TOL = 1e-9


class ProblemError(ValueError):
    """Raised when inputs violate a problem invariant."""


def _tolerances(x):
    return EQ_TOL * np.maximum(1.0, np.abs(x))


def weakly_dominates(g, h) -> bool:
    """True iff g >= h coordinatewise, up to the relative tie tolerance."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    return bool(np.all(g >= h - _tolerances(h)))


def strictly_dominates(g, h) -> bool:
    """True iff g >> h (strictly greater in every coordinate, beyond ties)."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    return bool(np.all(g > h + _tolerances(h)))


def _as_points(points, n: int | None = None) -> np.ndarray:
    pts = list(points)
    if not pts:
        raise ProblemError("empty point set")
    try:
        arr = np.asarray(pts, dtype=float)
    except ValueError as exc:
        raise ProblemError(f"points must be vectors of equal length: {exc}") from exc
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ProblemError("points must be vectors of equal length")
    if n is not None and arr.shape[1] != n:
        raise ProblemError(f"dimension mismatch: expected {n}, got {arr.shape[1]}")
    if arr.shape[1] < 2:
        raise ProblemError("problems need at least two players")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ProblemError("coordinates must be finite and nonnegative")
    return arr


@dataclass(frozen=True)
class Problem:
    """Comprehensive hull of the generator antichain, in canonical form."""

    gens: tuple[tuple[float, ...], ...]
    n: int

    def points(self) -> np.ndarray:
        """Generators as a (k, n) float array."""
        return np.asarray(self.gens, dtype=float)

    def __repr__(self) -> str:  # keep reprs short for witnesses
        return f"Problem(n={self.n}, gens={[tuple(g) for g in self.gens]})"


def _prune_to_antichain(arr: np.ndarray) -> tuple[tuple[float, ...], ...]:
    pts = sorted({tuple(float(v) for v in row) for row in arr})

    def killed_by(q, p):
        # q removes p on strict one-way dominance; near-equal pairs keep the
        # lexicographically greater point.
        if not weakly_dominates(q, p):
            return False
        if weakly_dominates(p, q):
            return q > p
        return True

    kept = [
        p
        for i, p in enumerate(pts)
        if not any(j != i and killed_by(q, p) for j, q in enumerate(pts))
    ]
    return tuple(kept)


def canonicalize(points, n: int | None = None) -> Problem:
    """Build the problem cmp(points) in canonical antichain form.

    Raises ProblemError on empty input, dimension mismatch, or a degenerate
    player (no point gives the player positive utility).
    """
    arr = _as_points(points, n)
    dim = arr.shape[1]
    maxima = arr.max(axis=0)
    if np.any(maxima <= 0):
        bad = int(np.argmax(maxima <= 0))
        raise ProblemError(f"degenerate player {bad}: no point has positive coordinate")
    return Problem(gens=_prune_to_antichain(arr), n=dim)


def symmetric_hull(points, n: int | None = None) -> Problem:
    """Build scmp(points): the comprehensive hull of all coordinate permutations."""
    arr = _as_points(points, n)
    dim = arr.shape[1]
    perms = [arr[:, list(p)] for p in itertools.permutations(range(dim))]
    return canonicalize(np.vstack(perms), dim)


def ideal_point(problem: Problem) -> np.ndarray:
    """Coordinatewise maximum over the problem (strictly positive)."""
    return problem.points().max(axis=0)


def contains(problem: Problem, x) -> bool:
    """Membership in the comprehensive set: some generator weakly dominates x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ProblemError(f"dimension mismatch: expected {problem.n}, got {x.shape}")
    if np.any(x < -_tolerances(x)):
        return False
    return any(weakly_dominates(g, x) for g in problem.gens)


def scale(problem: Problem, a) -> Problem:
    """Rescale each player's utility by a strictly positive factor."""
    a = np.asarray(a, dtype=float)
    if a.shape != (problem.n,):
        raise ProblemError(f"scale vector must have length {problem.n}")
    if np.any(a <= 0):
        raise ProblemError("nonpositive scale factor")
    return canonicalize(problem.points() * a, problem.n)


def permute(problem: Problem, pi) -> Problem:
    """Permute players: generator x maps to (x[pi[0]], ..., x[pi[n-1]])."""
    pi = tuple(int(i) for i in pi)
    if sorted(pi) != list(range(problem.n)):
        raise ProblemError(f"invalid permutation {pi} for n={problem.n}")
    return canonicalize(problem.points()[:, list(pi)], problem.n)


def power(problem: Problem, m: int) -> Problem:
    """Coordinatewise m-th power of the problem (the m-period problem)."""
    if int(m) != m or m < 1:
        raise ProblemError("power requires an integer m >= 1")
    return canonicalize(problem.points() ** int(m), problem.n)


def star(problem: Problem) -> Problem:
    """Two-period mix-and-match problem: hull of all pairwise generator products."""
    g = problem.points()
    prods = (g[:, None, :] * g[None, :, :]).reshape(-1, problem.n)
    return canonicalize(prods, problem.n)


def is_equal_ideal(problem: Problem) -> bool:
    """True iff every player's maximum achievable utility is the same."""
    b = ideal_point(problem)
    return bool(b.max() - b.min() <= EQ_TOL * max(1.0, b.max()))


def _directed_hausdorff(from_gens: np.ndarray, to_gens: np.ndarray) -> float:
    # sup over the comprehensive set is attained at a generator, and the
    # max-norm distance from a point to a box union is a clipped difference.
    excess = np.clip(from_gens[:, None, :] - to_gens[None, :, :], 0.0, None)
    return float(excess.max(axis=2).min(axis=1).max())


def hausdorff_distance(p: Problem, q: Problem) -> float:
    """Hausdorff distance between two comprehensive sets under the max norm."""
    if p.n != q.n:
        raise ProblemError("dimension mismatch")
    a, b = p.points(), q.points()
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))


def candidate_points(problem: Problem, resolution: int) -> np.ndarray:
    """Generators plus a weak-Pareto frontier grid at a per-axis resolution.

    For each generator g and each axis i with g[i] > 0, the top face x[i]=g[i]
    is sampled on the grid {k*g[j]/resolution} in the remaining coordinates;
    points strictly dominated by another generator are removed. The result is
    a (m, n) array of unique rows in lexicographic order; all generators are
    always included.
    """
    if int(resolution) != resolution or resolution < 1:
        raise ProblemError("resolution must be a positive integer")
    r = int(resolution)
    n = problem.n
    gens = problem.points()
    faces = [gens]
    for g in gens:
        axes = [np.linspace(0.0, gj, r + 1) for gj in g]
        for i in range(n):
            if g[i] <= 0:
                continue
            grids = axes[:i] + [np.asarray([g[i]])] + axes[i + 1 :]
            mesh = np.meshgrid(*grids, indexing="ij")
            faces.append(np.stack([m.ravel() for m in mesh], axis=1))
    pts = np.unique(np.vstack(faces), axis=0)
    dominated = np.zeros(len(pts), dtype=bool)
    for g in gens:
        dominated |= np.all(pts + _tolerances(pts) < g, axis=1)
    return pts[~dominated]


def problem_to_json(problem: Problem) -> dict:
    """Canonical JSON payload {"n": ..., "generators": [...]}."""
    return {"n": problem.n, "generators": [list(g) for g in problem.gens]}


def problem_from_json(payload) -> Problem:
    """Parse and canonicalize a problem payload."""
    if not isinstance(payload, dict) or "generators" not in payload:
        raise ProblemError('problem payload must be {"n": int, "generators": [[...]]}')
    n = payload.get("n")
    if n is not None and (not isinstance(n, int) or n < 2):
        raise ProblemError('"n" must be an integer >= 2')
    return canonicalize(payload["generators"], n)


def load_problem(path) -> Problem:
    with open(path) as fh:
        return problem_from_json(json.load(fh))


def save_problem(problem: Problem, path) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_json(problem), fh, indent=2)
        fh.write("\n")
