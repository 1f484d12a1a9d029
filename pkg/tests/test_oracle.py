import math

import numpy as np
import pytest

from bargainkit.oracle import (
    OracleConfig,
    OracleError,
    brute_force_solve,
    check_i_concavity,
    check_i_homogeneity,
    check_translation_invariance,
    cross_check,
    degree_one_value,
    i_transform,
    membership_predicate,
    v_from_definition,
)
from bargainkit.problem import canonicalize, symmetric_hull
from bargainkit.solutions import (
    dualself_spec,
    ks_spec,
    maxmin_spec,
    nash_spec,
    solution_spec,
    solve,
)
from bargainkit.weights import (
    confidence_collection,
    confidence_function,
    full_simplex,
    singleton,
    symmetrize,
    weight_collection,
    weight_set,
)

CONFIG = OracleConfig()
TRIANGLE = canonicalize([(1, 0), (0, 1), (0.5, 0.5)])
MM2 = maxmin_spec(weight_set([(0.25, 0.75), (0.75, 0.25)]))
DS_SYM = dualself_spec(symmetrize(weight_collection([[(0.25, 0.75)]])))
DS_TWO_SINGLETONS = dualself_spec(symmetrize(weight_collection([[(1.0, 0.0)]])))


def curved_spec():
    return solution_spec(
        "confidence_nash",
        True,
        confidence_collection(
            [confidence_function(full_simplex(2), [((1.0, 0.0), -0.5), ((-1.0, 0.0), 0.5)])]
        ),
    )


def test_brute_force_matches_examples():
    result = brute_force_solve(TRIANGLE, nash_spec(), CONFIG)
    assert result.chosen == ((0.5, 0.5),)
    result = brute_force_solve(canonicalize([(2, 1)]), ks_spec(), CONFIG)
    assert (2.0, 1.0) in result.chosen
    assert result.value == pytest.approx(1.0)


def test_brute_force_self_consistent_across_resolutions():
    coarse = brute_force_solve(TRIANGLE, nash_spec(), OracleConfig(16, 16))
    fine = brute_force_solve(TRIANGLE, nash_spec(), OracleConfig(32, 32))
    assert fine.value >= coarse.value - 1e-12
    assert coarse.chosen == fine.chosen == ((0.5, 0.5),)


def test_grid_vs_vertex_maxmin_values():
    rng = np.random.default_rng(17)
    from bargainkit.oracle import direct_objective_values
    from bargainkit.solutions import objective_values

    spec = maxmin_spec(full_simplex(2))
    x = rng.uniform(0.05, 1.0, size=(20, 2))
    exact = objective_values(spec, x)
    gridded, _ = direct_objective_values(spec, x, 64)
    lipschitz = float(np.max(np.abs(np.log(x))))
    assert np.all(gridded >= exact - 1e-12)
    assert np.max(np.abs(gridded - exact)) <= 2 * lipschitz / 64


def test_v_from_definition_examples():
    assert v_from_definition(ks_spec(), (0.5, 0.8), CONFIG) == pytest.approx(0.5, abs=2e-6)
    # the plain product's degree-1 representative is the geometric mean
    assert v_from_definition(nash_spec(), (0.5, 0.5), CONFIG) == pytest.approx(0.5, abs=2e-6)
    assert v_from_definition(ks_spec(), (0.7, 0.7), CONFIG) == pytest.approx(0.7, abs=2e-6)


def test_v_matches_degree_one_objective():
    rng = np.random.default_rng(23)
    for spec in (nash_spec(), ks_spec(), MM2, DS_SYM):
        for _ in range(6):
            x = rng.uniform(0.05, 1.0, size=2)
            assert v_from_definition(spec, x, CONFIG) == pytest.approx(
                degree_one_value(spec, x), abs=1e-5
            )


def test_v_requires_normalized_theorem_family():
    with pytest.raises(OracleError):
        v_from_definition(solution_spec("utilitarian"), (0.5, 0.5), CONFIG)
    with pytest.raises(OracleError):
        v_from_definition(ks_spec(), (0.5, 1.5), CONFIG)


def test_membership_predicate_is_threshold_in_alpha():
    # spot-check for the bisection's monotonicity assumption
    for spec in (ks_spec(), nash_spec(), MM2):
        x = np.array([0.4, 0.9])
        flags = [membership_predicate(spec, x, a) for a in np.linspace(0.01, 1.0, 60)]
        first_true = flags.index(True)
        assert all(flags[first_true:])
        assert not any(flags[:first_true])


def test_i_transform_examples():
    assert i_transform(ks_spec(), (0.0, 0.0)) == pytest.approx(0.0)
    assert i_transform(ks_spec(), (math.log(0.5), math.log(0.8))) == pytest.approx(
        math.log(0.5)
    )
    assert i_transform(nash_spec(), (-1.0, -1.0)) == pytest.approx(-1.0)
    mmD = maxmin_spec(full_simplex(2))
    assert i_transform(mmD, (-1.0, -2.0)) == pytest.approx(-2.0)
    assert i_transform(mmD, (-2.0, -4.0)) == pytest.approx(-4.0)


def test_translation_invariance_all_families():
    for spec in (nash_spec(), ks_spec(), MM2, DS_SYM, curved_spec()):
        report = check_translation_invariance(spec, 2, 80)
        assert report["ok"], report


def test_i_homogeneity_boundary():
    assert check_i_homogeneity(MM2, 2, 60)["ok"]
    assert check_i_homogeneity(DS_SYM, 2, 60)["ok"]
    violated = check_i_homogeneity(curved_spec(), 2, 60)
    assert not violated["ok"]
    assert violated["witness"] is not None


def test_i_concavity_boundary():
    assert check_i_concavity(MM2, 2, 120)["ok"]
    assert check_i_concavity(maxmin_spec(full_simplex(2)), 2, 120)["ok"]
    violated = check_i_concavity(DS_TWO_SINGLETONS, 2, 120)
    assert not violated["ok"]
    assert violated["witness"] is not None


def test_claim_four_slice_equal_levels():
    # pairs with equal transform level: midpoint cannot fall below the level
    rng = np.random.default_rng(31)
    spec = MM2
    for _ in range(40):
        y = rng.uniform(-2.5, -0.5, size=2)
        z = rng.uniform(-2.5, -0.5, size=2)
        shift = i_transform(spec, y) - i_transform(spec, z)
        z_adj = z + shift
        if np.any(z_adj > 0):
            continue
        assert i_transform(spec, 0.5 * y + 0.5 * z_adj) >= i_transform(spec, y) - 1e-9


def test_cross_check_families():
    config = OracleConfig(problem_resolution=16, simplex_resolution=64)
    for spec in (nash_spec(), ks_spec(), maxmin_spec(full_simplex(2)), DS_SYM, curved_spec()):
        report = cross_check(TRIANGLE, spec, config)
        assert report["ok"], report


def test_cross_check_exact_on_singleton_generator():
    config = OracleConfig(problem_resolution=8, simplex_resolution=32)
    report = cross_check(canonicalize([(2, 1)]), ks_spec(), config)
    assert report["ok"]
    assert report["gap"] == pytest.approx(0.0, abs=1e-12)


def test_resolution_monotone_maximum():
    spec = MM2
    prev = -np.inf
    for res in (8, 16, 32, 64):
        value = brute_force_solve(TRIANGLE, spec, OracleConfig(res, 32)).value
        assert value >= prev - 1e-12
        prev = value
