"""Command-line front end: solve, check, matrix, oracle, frontier.

Exit codes are stable and disjoint: 0 success / all-pass, 1 axiom or check
failure, 2 input error (parsing, schema, unusable flags), 3 invariant
violation in otherwise well-formed input.
"""

from __future__ import annotations

import argparse
import csv
import glob
import itertools
import json
import os
import sys

import numpy as np

from . import axioms, corpus, oracle
from .problem import (
    Problem,
    ProblemError,
    candidate_points,
    contains,
    ideal_point,
    is_equal_ideal,
    load_problem,
    permute,
)
from .solutions import (
    SolutionSpec,
    SpecError,
    load_spec,
    objective_values,
    solution_function,
    solve,
)
from .weights import WeightError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

ALL_AXIOMS = (
    "intermediate_pareto",
    "scale_invariance",
    "anonymity",
    "continuity",
    "weak_iia",
    "iia",
    "independence_of_timing",
    "combination_improvement",
    "homogeneity",
)


class InputError(ValueError):
    """Unreadable or malformed input (maps to exit code 2)."""


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _load_problem(path: str) -> Problem:
    try:
        return load_problem(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read problem file {path}: {exc}") from exc


def _load_spec(path: str) -> SolutionSpec:
    try:
        return load_spec(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read spec file {path}: {exc}") from exc


def _solve_report(problem: Problem, spec: SolutionSpec, result) -> dict:
    return {
        "family": spec.family,
        "normalized": spec.normalized,
        "n": problem.n,
        "value": result.value,
        "candidate_count": result.candidate_count,
        "chosen": [list(c) for c in result.chosen],
        "witnesses": [
            {"expert": w.expert, "weight": list(w.weight) if w.weight else None}
            for w in result.witnesses
        ],
    }


def cmd_solve(args) -> int:
    problem = _load_problem(args.problem)
    spec = _load_spec(args.spec)
    result = solve(problem, spec, args.resolution)
    if args.format == "json":
        _emit(json.dumps(_solve_report(problem, spec, result), indent=2), args.out)
        return EXIT_OK
    lines = [
        f"problem: n={problem.n}, {len(problem.gens)} generators",
        f"family: {spec.label()}",
        f"value: {result.value:.12g}",
        f"candidates: {result.candidate_count}",
        f"chosen ({len(result.chosen)}):",
    ]
    for point, w in zip(result.chosen, result.witnesses):
        coords = ", ".join(f"{v:.6g}" for v in point)
        extra = ""
        if w.weight is not None:
            wcoords = ", ".join(f"{v:.4g}" for v in w.weight)
            extra = f"   expert={w.expert} weight=({wcoords})"
        lines.append(f"  ({coords}){extra}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def _corpus_for_check(args) -> dict:
    rng = np.random.default_rng(args.seed)
    if args.builtin_corpus:
        problems = corpus.random_problems(2, 8, rng) + corpus.random_problems(3, 4, rng)
        symmetric = corpus.random_symmetric_problems(2, 6, rng)
        pairs = corpus.nested_equal_ideal_pairs(2, 8, rng)
        equal_ideal = [p for p, _ in pairs]
    else:
        paths = sorted(glob.glob(os.path.join(args.problem_dir, "*.json")))
        if not paths:
            raise InputError(f"no problem files in {args.problem_dir}")
        problems = [_load_problem(p) for p in paths]
        symmetric = [
            p
            for p in problems
            if all(
                permute(p, pi).gens == p.gens
                for pi in itertools.permutations(range(p.n))
            )
        ]
        equal_ideal = [p for p in problems if is_equal_ideal(p)]
        pairs = [
            (a, b)
            for a in equal_ideal
            for b in equal_ideal
            if a is not b and all(contains(a, g) for g in b.gens)
        ]
    return {
        "problems": problems,
        "symmetric": symmetric,
        "pairs": pairs,
        "equal_ideal": equal_ideal,
        "rng": rng,
    }


def _run_axiom(F, axiom: str, data: dict, resolution: int) -> list[axioms.AxiomReport]:
    rng = data["rng"]
    if axiom == "intermediate_pareto":
        return [axioms.check_intermediate_pareto(F, p, resolution) for p in data["problems"]]
    if axiom == "scale_invariance":
        reports = []
        for p in data["problems"]:
            for a in corpus.random_scale_vectors(p.n, 2, rng):
                reports.append(axioms.check_scale_invariance(F, p, a, resolution))
        return reports
    if axiom == "anonymity":
        return [axioms.check_anonymity(F, p, resolution) for p in data["symmetric"]]
    if axiom == "continuity":
        return [axioms.check_continuity(F, p, None, resolution) for p in data["problems"][:4]]
    if axiom == "weak_iia":
        return [axioms.check_weak_iia(F, s, sub, resolution) for s, sub in data["pairs"]]
    if axiom == "iia":
        return [axioms.check_iia(F, s, sub, resolution) for s, sub in data["pairs"]]
    if axiom == "independence_of_timing":
        return [
            axioms.check_independence_of_timing(F, p, m, resolution)
            for p in data["problems"]
            for m in (2, 3)
        ]
    if axiom == "combination_improvement":
        return [
            axioms.check_combination_improvement(F, p, resolution)
            for p in data["equal_ideal"]
        ]
    if axiom == "homogeneity":
        return [
            axioms.check_homogeneity(F, p, alpha, resolution)
            for p in data["problems"]
            for alpha in (0.5, 2.0)
        ]
    raise InputError(f"unknown axiom {axiom!r}")


def cmd_check(args) -> int:
    if bool(args.builtin_corpus) == bool(args.problem_dir):
        raise InputError("give exactly one of --problem-dir or --builtin-corpus")
    names = [a.strip() for a in (args.axioms or "").split(",") if a.strip()]
    if not names:
        raise InputError("empty axiom list")
    for name in names:
        if name not in ALL_AXIOMS:
            raise InputError(f"unknown axiom {name!r} (choose from {', '.join(ALL_AXIOMS)})")
    spec = _load_spec(args.spec)
    F = solution_function(spec)
    data = _corpus_for_check(args)
    rows = []
    any_fail = False
    for axiom in names:
        reports = _run_axiom(F, axiom, data, args.resolution)
        counts = {"pass": 0, "fail": 0, "inconclusive": 0, "inconclusive-pass": 0}
        first_fail = None
        for r in reports:
            counts[r.verdict] += 1
            if r.verdict == "fail" and first_fail is None:
                first_fail = r
        verdict = "fail" if counts["fail"] else ("pass" if counts["pass"] else "inconclusive-pass")
        any_fail = any_fail or bool(counts["fail"])
        rows.append(
            {
                "solution": spec.label(),
                "axiom": axiom,
                "verdict": verdict,
                "counts": counts,
                "witness": first_fail.witness if first_fail else None,
            }
        )
    if args.format == "json":
        _emit(json.dumps(rows, indent=2), args.out)
    else:
        lines = [f"{'axiom':<26} {'verdict':<18} pass/fail/inconcl."]
        for row in rows:
            c = row["counts"]
            lines.append(
                f"{row['axiom']:<26} {row['verdict']:<18} "
                f"{c['pass']}/{c['fail']}/{c['inconclusive'] + c['inconclusive-pass']}"
            )
        _emit("\n".join(lines), args.out)
    return EXIT_FAIL if any_fail else EXIT_OK


def cmd_matrix(args) -> int:
    result = axioms.independence_matrix(args.resolution, args.seed)
    solutions = list(axioms.DESIGNATED_FAILURES)
    if args.format == "json":
        payload = [
            {
                "solution": name,
                "axiom": axiom,
                "verdict": result.verdict(name, axiom),
                "witness": result.cells[(name, axiom)].witness,
            }
            for name in solutions
            for axiom in axioms.THEOREM_AXIOMS
        ]
        _emit(json.dumps({"diagonal_exact": result.diagonal_exact, "cells": payload}, indent=2), args.out)
    else:
        width = max(len(a) for a in axioms.THEOREM_AXIOMS) + 2
        header = f"{'solution':<18}" + "".join(f"{a:<{width}}" for a in axioms.THEOREM_AXIOMS)
        lines = [header]
        for name in solutions:
            cells = []
            for axiom in axioms.THEOREM_AXIOMS:
                verdict = result.verdict(name, axiom)
                mark = "FAIL" if verdict == "fail" else ("ok" if verdict == "pass" else "ok*")
                cells.append(f"{mark:<{width}}")
            lines.append(f"{name:<18}" + "".join(cells))
        lines.append(f"diagonal exact: {result.diagonal_exact}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK if result.diagonal_exact else EXIT_FAIL


def cmd_oracle(args) -> int:
    problem = _load_problem(args.problem)
    spec = _load_spec(args.spec)
    config = oracle.OracleConfig(
        problem_resolution=args.resolution,
        simplex_resolution=max(args.resolution, 8),
        seed=args.seed,
    )
    report = {"cross_check": oracle.cross_check(problem, spec, config)}
    ok = report["cross_check"]["ok"]
    if spec.normalized and spec.family in oracle.THEOREM_FAMILIES:
        rng = np.random.default_rng(args.seed)
        points = rng.uniform(0.05, 1.0, size=(3, problem.n))
        roundtrip = []
        for x in points:
            via_def = oracle.v_from_definition(spec, x, config)
            direct = oracle.degree_one_value(spec, x)
            roundtrip.append(
                {"x": x.tolist(), "via_definition": via_def, "direct": direct,
                 "ok": bool(abs(via_def - direct) <= 1e-5)}
            )
        report["representation_roundtrip"] = roundtrip
        report["translation_invariance"] = oracle.check_translation_invariance(
            spec, problem.n, 50, args.seed
        )
        ok = ok and all(r["ok"] for r in roundtrip) and report["translation_invariance"]["ok"]
    _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _frontier_polyline(problem: Problem) -> list[tuple[float, float]]:
    gens = sorted(problem.gens)
    pts = [(0.0, gens[0][1])]
    for i, g in enumerate(gens):
        pts.append((g[0], g[1]))
        if i + 1 < len(gens):
            pts.append((g[0], gens[i + 1][1]))
    pts.append((gens[-1][0], 0.0))
    return pts


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _frontier_svg(problem: Problem, specs, results) -> str:
    size, margin = 420.0, 45.0
    b = ideal_point(problem)
    span = float(max(b)) * 1.05

    def px(x):
        return margin + (size - 2 * margin) * x / span

    def py(y):
        return size - margin - (size - 2 * margin) * y / span

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
        f'<line x1="{px(0)}" y1="{py(0)}" x2="{px(span)}" y2="{py(0)}" stroke="black"/>',
        f'<line x1="{px(0)}" y1="{py(0)}" x2="{px(0)}" y2="{py(span)}" stroke="black"/>',
    ]
    path = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in _frontier_polyline(problem))
    parts.append(f'<polyline points="{path}" fill="none" stroke="#333" stroke-width="2"/>')
    for idx, (spec, result) in enumerate(zip(specs, results)):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        for point in result.chosen:
            parts.append(
                f'<circle cx="{px(point[0]):.2f}" cy="{py(point[1]):.2f}" r="5" '
                f'fill="none" stroke="{color}" stroke-width="2"/>'
            )
        parts.append(
            f'<text x="{margin:.0f}" y="{16 + 14 * idx:.0f}" fill="{color}" '
            f'font-size="12">{spec.label()}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_frontier(args) -> int:
    problem = _load_problem(args.problem)
    specs = [_load_spec(path) for path in args.spec]
    if args.format == "svg" and problem.n != 2:
        raise InputError("svg output is only available for n=2")
    results = [solve(problem, spec, args.resolution) for spec in specs]
    if args.format == "svg":
        _emit(_frontier_svg(problem, specs, results), args.out)
        return EXIT_OK
    cands = candidate_points(problem, args.resolution)
    b = ideal_point(problem)
    columns = {}
    flags = {}
    for spec, result in zip(specs, results):
        x = cands / b if spec.normalized else cands
        columns[spec.label()] = objective_values(spec, x)
        chosen = result.chosen_array()
        flags[spec.label()] = [
            bool(np.any(np.all(np.abs(chosen - row) <= 1e-12 + 1e-9 * np.abs(row), axis=1)))
            for row in cands
        ]
    header = [f"x{i + 1}" for i in range(problem.n)]
    for label in columns:
        header += [f"value_{label}", f"chosen_{label}"]
    rows = []
    for i, row in enumerate(cands):
        out_row = [f"{v:.12g}" for v in row]
        for label in columns:
            out_row.append(f"{columns[label][i]:.12g}")
            out_row.append("1" if flags[label][i] else "0")
        rows.append(out_row)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bargainkit",
        description="Multi-valued bargaining solutions with executable axiom checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--resolution", type=int, default=64)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", default="text")
        p.add_argument("--out", default=None)

    p = sub.add_parser("solve", help="solve a problem under a solution spec")
    p.add_argument("--problem", required=True)
    p.add_argument("--spec", required=True)
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="run axiom checks for a spec over a corpus")
    p.add_argument("--problem-dir", default=None)
    p.add_argument("--builtin-corpus", action="store_true")
    p.add_argument("--spec", required=True)
    p.add_argument("--axioms", required=True, help="comma-separated axiom names")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("matrix", help="independence matrix of the five counterexamples")
    common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("oracle", help="brute-force and representation cross-checks")
    p.add_argument("--problem", required=True)
    p.add_argument("--spec", required=True)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("frontier", help="export frontier values (csv) or a plot (svg)")
    p.add_argument("--problem", required=True)
    p.add_argument("--spec", action="append", required=True)
    common(p)
    p.set_defaults(func=cmd_frontier)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        if args.resolution < 1:
            raise InputError("resolution must be >= 1")
        if args.format not in ("text", "json", "csv", "svg"):
            raise InputError(f"unknown format {args.format!r}")
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ProblemError, WeightError, SpecError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
