import math

import numpy as np
import pytest

from bargainkit.problem import canonicalize, candidate_points, ideal_point, symmetric_hull
from bargainkit.solutions import (
    SpecError,
    dictatorship_solve,
    dualself_spec,
    egalitarian_spec,
    eval_objective,
    eval_with_witness,
    ks_spec,
    lexicographic_ks_solve,
    maxmin_spec,
    nash_spec,
    objective_values,
    solution_spec,
    solve,
    spec_from_json,
    spec_to_json,
    utilitarian_spec,
    weak_pareto_solve,
    zero_solve,
)
from bargainkit.weights import (
    confidence_collection,
    confidence_function,
    constant_confidence,
    full_simplex,
    singleton,
    symmetrize,
    weight_collection,
    weight_set,
)

TRIANGLE = canonicalize([(1, 0), (0, 1), (0.5, 0.5)])


def curved_confidence_spec(n=2):
    return solution_spec(
        "confidence_nash",
        True,
        confidence_collection(
            [confidence_function(full_simplex(n), [((1.0,) + (0.0,) * (n - 1), -0.5), ((-1.0,) + (0.0,) * (n - 1), 0.5)])]
        ),
    )


def test_spec_validation():
    with pytest.raises(SpecError):
        solution_spec("egalitarian", normalized=True)
    with pytest.raises(SpecError):
        solution_spec("kalai_smorodinsky", normalized=False)
    with pytest.raises(SpecError):
        solution_spec("maxmin_nash", weights=None)
    with pytest.raises(SpecError):
        solution_spec("nash", weights=full_simplex(2))
    with pytest.raises(SpecError):
        solution_spec("made_up")


def test_eval_examples():
    assert eval_objective(nash_spec(), (0.5, 0.5)) == pytest.approx(0.25)
    assert eval_objective(ks_spec(), (0.5, 0.8)) == pytest.approx(0.5)
    assert eval_objective(maxmin_spec(full_simplex(2)), (0.5, 0.8)) == pytest.approx(0.5)
    assert eval_objective(maxmin_spec(singleton((0.5, 0.5))), (0.5, 0.8)) == pytest.approx(
        math.sqrt(0.4)
    )
    two_dictators = dualself_spec(weight_collection([[(1.0, 0.0)], [(0.0, 1.0)]]))
    assert eval_objective(two_dictators, (0.5, 0.8)) == pytest.approx(0.8)


def test_solve_triangle_nash():
    result = solve(TRIANGLE, nash_spec())
    assert result.chosen == ((0.5, 0.5),)
    assert result.value == pytest.approx(0.25)
    assert result.candidate_count > 3


def test_solve_single_box_ks():
    result = solve(canonicalize([(2, 1)]), ks_spec())
    assert result.chosen == ((2.0, 1.0),)
    assert result.value == pytest.approx(1.0)


def test_symmetric_problem_symmetric_chosen():
    problem = symmetric_hull([(2, 1)])
    for spec in (nash_spec(), ks_spec(), maxmin_spec(full_simplex(2))):
        chosen = set(solve(problem, spec).chosen)
        assert {tuple(reversed(c)) for c in chosen} == chosen


def test_witnesses_recorded():
    wset = weight_set([(0.25, 0.75), (0.75, 0.25)])
    result = solve(canonicalize([(2, 1)]), maxmin_spec(wset))
    assert result.chosen == ((2.0, 1.0),)
    assert result.witnesses[0].expert == 0
    assert result.witnesses[0].weight in wset.vertices

    two = dualself_spec(weight_collection([[(1.0, 0.0)], [(0.0, 1.0)]]))
    value, witness = eval_with_witness(two, np.array([0.5, 0.8]))
    assert value == pytest.approx(0.8)
    assert witness.weight == (0.0, 1.0)


def test_lexicographic_examples():
    both = lexicographic_ks_solve(canonicalize([(1, 0.5), (0.5, 1)]))
    assert set(both.chosen) == {(1.0, 0.5), (0.5, 1.0)}
    assert lexicographic_ks_solve(canonicalize([(1, 1)])).chosen == ((1.0, 1.0),)
    # sorted normalized coordinates decide: b = (1, 0.6), so (1, 0.5)
    # normalizes to (1, 0.833) and lexicographically beats (0.6, 1).
    result = lexicographic_ks_solve(canonicalize([(1, 0.5), (0.6, 0.6)]))
    assert result.chosen == ((1.0, 0.5),)


def test_counterexample_solutions():
    assert dictatorship_solve(canonicalize([(1, 0), (0, 1)]), 0).chosen == ((1.0, 0.0),)
    assert zero_solve(TRIANGLE).chosen == ((0.0, 0.0),)
    wp = weak_pareto_solve(canonicalize([(1, 1)]), resolution=2)
    assert set(wp.chosen) == {(0.0, 1.0), (0.5, 1.0), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0)}


def test_special_case_equivalences_small():
    problems = [
        TRIANGLE,
        symmetric_hull([(2, 1)]),
        canonicalize([(1.3, 0.4), (0.7, 1.1), (0.2, 1.5)]),
    ]
    n = 2
    ks_twin = dualself_spec(weight_collection([full_simplex(n)]))
    nash_twin = dualself_spec(weight_collection([[(0.5, 0.5)]]))
    ks_conf = solution_spec(
        "confidence_nash", True, confidence_collection([constant_confidence(n)])
    )
    nash_conf = solution_spec(
        "confidence_nash",
        True,
        confidence_collection([constant_confidence(n, support=singleton((0.5, 0.5)))]),
    )
    for problem in problems:
        cands = candidate_points(problem, 32)
        assert solve(problem, ks_twin, candidates=cands).chosen == solve(
            problem, ks_spec(), candidates=cands
        ).chosen
        assert solve(problem, nash_twin, candidates=cands).chosen == solve(
            problem, nash_spec(), candidates=cands
        ).chosen
        assert solve(problem, ks_conf, candidates=cands).chosen == solve(
            problem, ks_spec(), candidates=cands
        ).chosen
        assert solve(problem, nash_conf, candidates=cands).chosen == solve(
            problem, nash_spec(), candidates=cands
        ).chosen


def test_scale_argmax_covariance():
    rng = np.random.default_rng(8)
    from bargainkit.problem import scale

    for _ in range(5):
        problem = canonicalize(rng.uniform(0.1, 2.0, size=(3, 2)))
        a = rng.uniform(0.3, 3.0, size=2)
        cands = candidate_points(problem, 16)
        for spec in (nash_spec(), ks_spec(), maxmin_spec(full_simplex(2))):
            base = solve(problem, spec, candidates=cands).chosen_array()
            scaled = solve(scale(problem, a), spec, candidates=cands * a).chosen_array()
            assert np.allclose(np.sort(base * a, axis=0), np.sort(scaled, axis=0), atol=1e-9)


def test_objective_monotonicity():
    rng = np.random.default_rng(4)
    specs = [
        nash_spec(),
        ks_spec(),
        maxmin_spec(weight_set([(0.25, 0.75), (0.75, 0.25)])),
        dualself_spec(symmetrize(weight_collection([[(0.7, 0.3)]]))),
        curved_confidence_spec(),
        utilitarian_spec(),
    ]
    for _ in range(40):
        x = rng.uniform(0.05, 1.0, size=2)
        y = x * rng.uniform(0.3, 0.95, size=2)  # y strictly below x
        for spec in specs:
            assert eval_objective(spec, x) > eval_objective(spec, y)


def test_log_domain_matches_direct_product():
    rng = np.random.default_rng(12)
    wset = weight_set([(0.3, 0.7), (0.6, 0.4)])
    spec = maxmin_spec(wset)
    for _ in range(50):
        x = rng.uniform(0.05, 1.0, size=2)
        direct = min(np.prod(x ** np.asarray(v)) for v in wset.vertices)
        assert eval_objective(spec, x) == pytest.approx(direct, rel=1e-12)


def test_zero_coordinate_is_limit():
    specs = [
        maxmin_spec(full_simplex(2)),
        maxmin_spec(singleton((0.5, 0.5))),
        maxmin_spec(weight_set([(0.0, 1.0)])),
        curved_confidence_spec(),
    ]
    for spec in specs:
        at_zero = eval_objective(spec, (0.0, 0.8))
        previous = None
        for eps in (1e-4, 1e-6, 1e-8):
            val = eval_objective(spec, (eps, 0.8))
            if previous is not None:
                assert val <= previous + 1e-15  # monotone decrease toward the limit
            previous = val
        assert at_zero <= previous + 1e-12
        assert abs(previous - at_zero) <= 1e-3


def test_zero_weight_zero_coordinate_convention():
    # weight fixed on player 2 ignores player 1's zero: 0^0 = 1
    assert eval_objective(maxmin_spec(weight_set([(0.0, 1.0)])), (0.0, 0.8)) == pytest.approx(0.8)
    assert eval_objective(maxmin_spec(full_simplex(2)), (0.0, 0.8)) == 0.0


def test_all_zero_products_tie():
    two_boxes = canonicalize([(1, 0), (0, 1)])
    result = solve(two_boxes, nash_spec(), resolution=4)
    assert result.value == 0.0
    assert len(result.chosen) == result.candidate_count


def test_egalitarian_and_utilitarian_raw():
    problem = canonicalize([(2, 1)])
    result = solve(problem, egalitarian_spec())
    assert result.value == pytest.approx(1.0)
    assert (2.0, 1.0) in result.chosen
    assert all(min(c) == pytest.approx(1.0) for c in result.chosen)
    assert solve(problem, utilitarian_spec()).chosen == ((2.0, 1.0),)
    assert eval_objective(utilitarian_spec(), (2, 1)) == pytest.approx(3.0)


def test_spec_json_roundtrip():
    specs = [
        nash_spec(),
        ks_spec(),
        maxmin_spec(weight_set([(0.25, 0.75), (0.75, 0.25)])),
        dualself_spec(symmetrize(weight_collection([[(1.0, 0.0)]]))),
        curved_confidence_spec(),
        utilitarian_spec(),
    ]
    for spec in specs:
        parsed = spec_from_json(spec_to_json(spec))
        assert parsed.family == spec.family
        assert parsed.normalized == spec.normalized
        if spec.weights is not None:
            assert type(parsed.weights) is type(spec.weights)
    with pytest.raises(SpecError):
        spec_from_json({"normalized": True})
