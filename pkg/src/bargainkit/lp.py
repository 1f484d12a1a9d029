"""Dense two-phase simplex solver with Bland's rule.

Sized for the tiny programs that arise when minimizing affine confidence
pieces over weight polytopes (a handful of variables and constraints), so the
implementation favors determinism over sparse-matrix machinery: Bland's rule
fixes the pivot order, which makes optima reproducible across platforms and
rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PIVOT_TOL = 1e-9


class LPError(RuntimeError):
    """Raised on malformed solver input."""


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    value: float | None


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]
    basis[row] = col


def _run_simplex(tableau: np.ndarray, basis: list[int], cost: np.ndarray) -> str:
    # tableau rows are [A | b] kept in canonical form for the current basis.
    m, width = tableau.shape
    nv = width - 1
    while True:
        reduced = cost[:nv] - cost[basis] @ tableau[:, :nv]
        entering = None
        for j in range(nv):
            if reduced[j] < -_PIVOT_TOL:
                entering = j  # Bland: lowest eligible index
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(m):
            coef = tableau[i, entering]
            if coef > _PIVOT_TOL:
                ratio = tableau[i, -1] / coef
                if best is None or ratio < best[0] - _PIVOT_TOL or (
                    abs(ratio - best[0]) <= _PIVOT_TOL and basis[i] < best[1]
                ):
                    best = (ratio, basis[i], i)
        if best is None:
            return "unbounded"
        _pivot(tableau, basis, best[2], entering)


def lp_solve(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> LPResult:
    """Minimize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.

    Returns an optimal basic solution; infeasible and unbounded programs are
    reported distinctly in the result status.
    """
    c = np.asarray(c, dtype=float).ravel()
    nv = c.size
    rows = []
    rhs = []
    n_slack = 0
    if a_ub is not None:
        a_ub = np.atleast_2d(np.asarray(a_ub, dtype=float))
        b_ub = np.asarray(b_ub, dtype=float).ravel()
        if a_ub.shape != (b_ub.size, nv):
            raise LPError("inequality shapes do not match")
        n_slack = b_ub.size
        for i in range(n_slack):
            row = np.zeros(nv + n_slack)
            row[:nv] = a_ub[i]
            row[nv + i] = 1.0
            rows.append(row)
            rhs.append(b_ub[i])
    if a_eq is not None:
        a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
        b_eq = np.asarray(b_eq, dtype=float).ravel()
        if a_eq.shape != (b_eq.size, nv):
            raise LPError("equality shapes do not match")
        for i in range(b_eq.size):
            row = np.zeros(nv + n_slack)
            row[:nv] = a_eq[i]
            rows.append(row)
            rhs.append(b_eq[i])
    if not rows:
        raise LPError("no constraints given")

    a = np.asarray(rows, dtype=float)
    b = np.asarray(rhs, dtype=float)
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0
    m, total = a.shape

    # Phase 1: artificial variables form the starting identity basis.
    tableau = np.hstack([a, np.eye(m), b.reshape(-1, 1)])
    basis = list(range(total, total + m))
    phase1_cost = np.concatenate([np.zeros(total), np.ones(m), [0.0]])
    status = _run_simplex(tableau, basis, phase1_cost)
    if status != "optimal":
        return LPResult("infeasible", None, None)
    art_value = float(phase1_cost[basis] @ tableau[:, -1])
    if art_value > 1e-7:
        return LPResult("infeasible", None, None)

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= total:
            pivot_col = next(
                (j for j in range(total) if abs(tableau[i, j]) > _PIVOT_TOL), None
            )
            if pivot_col is None:
                continue  # redundant constraint row
            _pivot(tableau, basis, i, pivot_col)
        keep.append(i)
    tableau = np.hstack([tableau[keep][:, :total], tableau[keep][:, -1:]])
    basis = [basis[i] for i in keep]

    phase2_cost = np.concatenate([c, np.zeros(n_slack), [0.0]])
    status = _run_simplex(tableau, basis, phase2_cost)
    if status != "optimal":
        return LPResult("unbounded", None, None)
    x = np.zeros(total)
    for i, var in enumerate(basis):
        x[var] = tableau[i, -1]
    x = x[:nv]
    return LPResult("optimal", x, float(c @ x))
