"""Seeded problem corpora for axiom checks, the independence matrix, and
acceptance runs.

All randomness flows through numpy Generators seeded from a single integer so
every corpus (and therefore every report built on it) is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import Problem, canonicalize, ideal_point, symmetric_hull


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 42
    count: int = 200
    dims: tuple[int, ...] = (2, 3)
    coord_low: float = 0.1
    coord_high: float = 2.0
    max_generators: int = 5


def random_problems(n: int, count: int, rng: np.random.Generator, low: float = 0.1, high: float = 2.0, max_generators: int = 5) -> list[Problem]:
    """Problems with 1..max_generators generators, coordinates in [low, high]."""
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_generators + 1))
        out.append(canonicalize(rng.uniform(low, high, size=(k, n))))
    return out


def random_symmetric_problems(n: int, count: int, rng: np.random.Generator, low: float = 0.1, high: float = 2.0) -> list[Problem]:
    """Symmetric hulls of 1..3 random points."""
    out = []
    for _ in range(count):
        k = int(rng.integers(1, 4))
        out.append(symmetric_hull(rng.uniform(low, high, size=(k, n))))
    return out


def _pin_to_unit_ideal(points: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # Force the ideal point to the unit vector by pinning one point per axis.
    k, n = points.shape
    for i in range(n):
        points[int(rng.integers(0, k)), i] = 1.0
    return points


def random_equal_ideal_problems(n: int, count: int, rng: np.random.Generator, low: float = 0.1) -> list[Problem]:
    """Problems in the equal-ideal class with ideal point exactly 1."""
    out = []
    for _ in range(count):
        k = int(rng.integers(max(2, n), 6))
        pts = _pin_to_unit_ideal(rng.uniform(low, 1.0, size=(k, n)), rng)
        out.append(canonicalize(pts))
    return out


def nested_equal_ideal_pairs(n: int, count: int, rng: np.random.Generator, low: float = 0.1) -> list[tuple[Problem, Problem]]:
    """Nested equal-ideal pairs built by dropping non-essential generators.

    The contraction keeps every generator that is the sole holder of a
    coordinate maximum, so both problems share the unit ideal point and the
    inner problem's generators are a subset of the outer problem's (hence of
    its candidate grid).
    """
    pairs = []
    for _ in range(count):
        k = int(rng.integers(n + 2, n + 5))
        pts = _pin_to_unit_ideal(rng.uniform(low, 1.0, size=(k, n)), rng)
        outer = canonicalize(pts)
        gens = outer.points()
        b = ideal_point(outer)
        essential = np.zeros(len(gens), dtype=bool)
        for i in range(n):
            holders = np.flatnonzero(gens[:, i] >= b[i] - 1e-12)
            if len(holders) == 1:
                essential[holders[0]] = True
        droppable = np.flatnonzero(~essential)
        if len(droppable) == 0:
            pairs.append((outer, outer))
            continue
        n_drop = int(rng.integers(1, len(droppable) + 1))
        drop = set(rng.choice(droppable, size=n_drop, replace=False).tolist())
        keep = [g for j, g in enumerate(gens) if j not in drop]
        pairs.append((outer, canonicalize(keep)))
    return pairs


def random_scale_vectors(n: int, count: int, rng: np.random.Generator, low: float = 0.2, high: float = 5.0) -> list[np.ndarray]:
    return [rng.uniform(low, high, size=n) for _ in range(count)]


# Curated inputs behind the independence matrix (section-4-style counterexamples).


def utilitarian_scale_flip_case() -> tuple[Problem, np.ndarray]:
    """Contraction-free scale flip: total utility prefers (0.6,0.6) until
    player 1's scale is inflated."""
    problem = canonicalize([(1.0, 0.0), (0.0, 1.0), (0.6, 0.6)])
    return problem, np.asarray([10.0, 1.0])


def dictatorship_anonymity_case() -> Problem:
    return symmetric_hull([(2.0, 1.0)])


def weak_pareto_weak_iia_pair() -> tuple[Problem, Problem]:
    """Nested equal-ideal pair where the inner problem grows a new weakly
    Pareto generator that was interior to the outer problem."""
    outer = canonicalize([(1.0, 1.0)])
    inner = canonicalize([(1.0, 0.5), (0.5, 1.0), (0.7, 0.7)])
    return outer, inner


def lexicographic_threshold_problem() -> Problem:
    return canonicalize([(1.0, 0.5), (0.5, 1.0), (0.5, 0.5)])


def lexicographic_threshold_schedule(delta: float) -> Problem:
    """Perturbs the diagonal generator upward; the lexicographic solution
    jumps from the diagonal to the outer generators as delta -> 0."""
    return canonicalize([(1.0, 0.5), (0.5, 1.0), (0.5 + delta, 0.5 + delta)])


def combination_improvement_fail_problem() -> Problem:
    return symmetric_hull([(1.0, 0.25)])


def timing_witness_problems(rng: np.random.Generator, count: int = 20) -> list[Problem]:
    """Two-generator equal-ideal problems used to hunt timing violations."""
    ts = np.linspace(0.2, 0.6, count)
    problems = [symmetric_hull([(1.0, float(t))]) for t in ts]
    for _ in range(count):
        t = float(rng.uniform(0.15, 0.7))
        problems.append(symmetric_hull([(1.0, t)]))
    return problems
