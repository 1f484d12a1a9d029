import numpy as np
import pytest

from bargainkit import corpus
from bargainkit.axioms import (
    DESIGNATED_FAILURES,
    THEOREM_AXIOMS,
    check_anonymity,
    check_combination_improvement,
    check_continuity,
    check_homogeneity,
    check_iia,
    check_independence_of_timing,
    check_intermediate_pareto,
    check_scale_invariance,
    check_weak_iia,
    independence_matrix,
    replay_witness,
)
from bargainkit.problem import ProblemError, canonicalize, symmetric_hull
from bargainkit.solutions import (
    dualself_spec,
    ks_spec,
    maxmin_spec,
    named_counterexamples,
    nash_spec,
    solution_function,
    solution_spec,
    utilitarian_spec,
)
from bargainkit.weights import (
    confidence_collection,
    confidence_function,
    full_simplex,
    symmetrize,
    weight_collection,
    weight_set,
)

TRIANGLE = canonicalize([(1, 0), (0, 1), (0.5, 0.5)])
NASH = solution_function(nash_spec())
KS = solution_function(ks_spec())
UTIL = solution_function(utilitarian_spec())
COUNTEREXAMPLES = named_counterexamples()


def curved_confidence():
    return solution_function(
        solution_spec(
            "confidence_nash",
            True,
            confidence_collection(
                [confidence_function(full_simplex(2), [((1.0, 0.0), -0.5), ((-1.0, 0.0), 0.5)])]
            ),
        )
    )


def test_intermediate_pareto():
    assert check_intermediate_pareto(NASH, TRIANGLE).verdict == "pass"
    report = check_intermediate_pareto(COUNTEREXAMPLES["zero"], TRIANGLE)
    assert report.verdict == "fail"
    assert report.witness["point"] == [0.0, 0.0]
    assert check_intermediate_pareto(COUNTEREXAMPLES["weak_pareto"], TRIANGLE).verdict == "pass"


def test_scale_invariance():
    assert check_scale_invariance(NASH, TRIANGLE, (2, 3)).verdict == "pass"
    problem, a = corpus.utilitarian_scale_flip_case()
    report = check_scale_invariance(UTIL, problem, a)
    assert report.verdict == "fail"
    assert check_scale_invariance(UTIL, problem, (1, 1)).verdict == "pass"


def test_anonymity():
    problem = corpus.dictatorship_anonymity_case()
    assert check_anonymity(NASH, problem).verdict == "pass"
    assert check_anonymity(COUNTEREXAMPLES["dictatorship"], problem).verdict == "fail"
    assert check_anonymity(UTIL, canonicalize([(1, 1)])).verdict == "pass"
    with pytest.raises(ProblemError):
        check_anonymity(NASH, canonicalize([(2, 1)]))


def test_weak_iia_pass_and_preconditions():
    rng = np.random.default_rng(0)
    pairs = corpus.nested_equal_ideal_pairs(2, 10, rng)
    for big, small in pairs:
        for F in (NASH, KS):
            assert check_weak_iia(F, big, small).verdict in ("pass", "inconclusive")
    with pytest.raises(ProblemError):
        check_weak_iia(NASH, canonicalize([(2, 1)]), canonicalize([(1, 0.5)]))
    with pytest.raises(ProblemError):
        check_weak_iia(NASH, canonicalize([(1, 1)]), canonicalize([(1.5, 1.5)]))


def test_weak_iia_weak_pareto_failure():
    big, small = corpus.weak_pareto_weak_iia_pair()
    report = check_weak_iia(COUNTEREXAMPLES["weak_pareto"], big, small)
    assert report.verdict == "fail"
    assert [0.7, 0.7] in report.witness["got"]
    assert check_weak_iia(COUNTEREXAMPLES["lexicographic_ks"], big, small).verdict in (
        "pass",
        "inconclusive",
    )


def test_full_iia_for_raw_families():
    rng = np.random.default_rng(2)
    nash_raw = solution_function(nash_spec(normalized=False))
    for big, small in corpus.nested_equal_ideal_pairs(2, 8, rng):
        assert check_iia(nash_raw, big, small).verdict in ("pass", "inconclusive")
        assert check_iia(UTIL, big, small).verdict in ("pass", "inconclusive")


def test_iia_fails_for_ks_contraction():
    # the contraction drops the corner that pinned player 2's ideal value
    big = canonicalize([(1.0, 0.4), (0.4, 1.0), (0.8, 0.8)])
    small = canonicalize([(1.0, 0.4), (0.8, 0.8)])
    report = check_iia(KS, big, small)
    assert report.verdict == "fail"


def test_independence_of_timing():
    wset = weight_set([(0.25, 0.75), (0.75, 0.25)])
    maxmin = solution_function(maxmin_spec(wset))
    for m in (2, 3):
        assert check_independence_of_timing(maxmin, TRIANGLE, m).verdict == "pass"
        assert check_independence_of_timing(NASH, TRIANGLE, m).verdict == "pass"
    assert check_independence_of_timing(NASH, TRIANGLE, 1).verdict == "pass"


def test_timing_violation_for_curved_confidence():
    F = curved_confidence()
    problems = corpus.timing_witness_problems(np.random.default_rng(42), 5)
    verdicts = [check_independence_of_timing(F, p, 2, 32).verdict for p in problems]
    assert "fail" in verdicts


def test_combination_improvement():
    problem = corpus.combination_improvement_fail_problem()
    ks_no_weights = solution_function(maxmin_spec(full_simplex(2)))
    assert check_combination_improvement(ks_no_weights, problem).verdict == "pass"
    two_singletons = solution_function(
        dualself_spec(symmetrize(weight_collection([[(1.0, 0.0)]])))
    )
    report = check_combination_improvement(two_singletons, problem)
    assert report.verdict == "fail"
    assert report.witness["product"] == [0.25, 0.25]
    assert check_combination_improvement(NASH, TRIANGLE).verdict == "pass"
    with pytest.raises(ProblemError):
        check_combination_improvement(NASH, canonicalize([(2, 1)]))


def test_homogeneity():
    assert check_homogeneity(UTIL, TRIANGLE, 2.0).verdict == "pass"
    egal = solution_function(solution_spec("egalitarian"))
    assert check_homogeneity(egal, TRIANGLE, 0.5).verdict == "pass"
    assert check_homogeneity(KS, TRIANGLE, 3.0).verdict == "pass"


def test_continuity():
    threshold = corpus.lexicographic_threshold_problem()
    schedule = corpus.lexicographic_threshold_schedule
    report = check_continuity(COUNTEREXAMPLES["lexicographic_ks"], threshold, schedule)
    assert report.verdict == "fail"
    assert report.witness["limit"] == pytest.approx([0.5, 0.5])
    assert check_continuity(NASH, threshold, schedule).verdict == "inconclusive-pass"
    assert check_continuity(NASH, TRIANGLE).verdict == "inconclusive-pass"
    assert check_continuity(COUNTEREXAMPLES["zero"], TRIANGLE).verdict == "inconclusive-pass"


def test_witness_replay_reproduces_failures():
    problem, a = corpus.utilitarian_scale_flip_case()
    report = check_scale_invariance(UTIL, problem, a)
    assert replay_witness(UTIL, report).verdict == "fail"

    report = check_anonymity(
        COUNTEREXAMPLES["dictatorship"], corpus.dictatorship_anonymity_case()
    )
    assert replay_witness(COUNTEREXAMPLES["dictatorship"], report).verdict == "fail"

    big, small = corpus.weak_pareto_weak_iia_pair()
    report = check_weak_iia(COUNTEREXAMPLES["weak_pareto"], big, small)
    assert replay_witness(COUNTEREXAMPLES["weak_pareto"], report).verdict == "fail"


def test_theorem_families_pass_core_axioms():
    rng = np.random.default_rng(6)
    specs = [
        nash_spec(),
        ks_spec(),
        maxmin_spec(weight_set([(0.25, 0.75), (0.75, 0.25)])),
        dualself_spec(symmetrize(weight_collection([[(1.0, 0.0)]]))),
    ]
    problems = corpus.random_problems(2, 4, rng)
    symmetric = corpus.random_symmetric_problems(2, 3, rng)
    for spec in specs:
        F = solution_function(spec)
        for p in problems:
            assert check_intermediate_pareto(F, p, 32).verdict == "pass"
            a = rng.uniform(0.3, 3.0, size=2)
            assert check_scale_invariance(F, p, a, 32).verdict == "pass"
        for p in symmetric:
            assert check_anonymity(F, p, 32).verdict == "pass"


def test_independence_matrix_small():
    result = independence_matrix(resolution=16, seed=42)
    assert result.diagonal_exact
    for name, axiom in DESIGNATED_FAILURES.items():
        assert result.verdict(name, axiom) == "fail"
        for other in THEOREM_AXIOMS:
            if other != axiom:
                assert result.verdict(name, other) != "fail"
