import numpy as np
import pytest
from frtpp.dataobj import (Alternative, ChainConfig, ImputationPosture, ScenarioConfig, StatKind,
                           validate_dataset)
from frtpp.error import (AllDrawsDegenerateError, CombinatorialBoundError, DegenerateDenominatorError,
                         NoCompliersInArmError, PostureError, ValidationError)
from frtpp.frt import (at_least, at_most, discrepancy, enumerate_frt_distribution, enumerate_frt_pvalue,
                       fold, frt_pp_pvalue, itt_statistic, iv_statistic, model_based_pvalue,
                       permutation_pvalue, replicate_values)
from frtpp.model import generate
from frtpp.stats import derive_stream, sample_permutation

M1 = ImputationPosture.from_method("m1")
M2 = ImputationPosture.from_method("m2")
SHORT = ChainConfig(total_iterations=60, burn_in=20)

Y6 = np.array([2.0, 0.5, 1.3, -0.4, 0.9, 3.1])
C6 = np.array([1, 1, 1, 1, 0, 0])
Z6 = np.array([1, 1, 0, 1, 0, 0])


def test_iv_statistic_examples():
    assert iv_statistic([3, 1, 1, 1], [1, 0, 0, 0], [1, 1, 0, 0]) == pytest.approx(2.0)
    y, z = np.array([4.0, 1.0, 2.0, 0.5]), np.array([1, 0, 1, 0])
    assert iv_statistic(y, z, z) == pytest.approx(itt_statistic(y, z))
    with pytest.raises(DegenerateDenominatorError):
        iv_statistic([5, 1], [0, 0], [1, 0])


def test_discrepancy_examples():
    assert discrepancy([3, 9, 1, 2], [1, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.5)
    y, z = np.array([4.0, 1.0, 2.0, 0.5]), np.array([1, 0, 1, 0])
    assert discrepancy(y, np.ones(4), z) == pytest.approx(itt_statistic(y, z))
    with pytest.raises(NoCompliersInArmError):
        discrepancy([1, 2, 3, 4], [0, 0, 0, 0], [1, 1, 0, 0])


def test_arms_must_be_non_empty():
    with pytest.raises(ValueError):
        itt_statistic([1, 2], [1, 1])


def test_vectorized_values_match_scalar_statistics():
    stream = derive_stream(1, "vector")
    rng = np.random.default_rng(1)
    y = rng.normal(size=12)
    c = np.array([1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1])
    block = np.stack([sample_permutation(stream, 12, 5) for _ in range(20)])
    disc = replicate_values(StatKind.DISCREPANCY, y, c, block)
    iv = replicate_values(StatKind.IV, y, c, block)
    for row, d_value, iv_value in zip(block, disc, iv):
        assert d_value == pytest.approx(discrepancy(y, c, row))
        assert iv_value == pytest.approx(iv_statistic(y, c * row, row))
    assert np.isnan(replicate_values(StatKind.DISCREPANCY, y, np.r_[1, np.zeros(11)], block)).all()


def test_iv_replicate_only_sees_complier_share():
    y = np.array([1.0, 2.0, 0.0, 5.0])
    z = np.array([1, 1, 0, 0])
    # relabelling control units never changes C Z for this assignment
    a = replicate_values(StatKind.IV, y, np.array([1, 0, 1, 0]), z)
    b = replicate_values(StatKind.IV, y, np.array([1, 0, 0, 1]), z)
    assert a[0] == b[0]


def test_tie_tolerance():
    assert at_least(np.array([0.1 + 0.2]), 0.3).all()
    assert at_most(np.array([0.1 + 0.2]), 0.3).all()
    assert not at_least(np.array([0.29]), 0.3).any()


def test_fold():
    assert fold(3, 9, 10, Alternative.GREATER) == 0.3
    assert fold(3, 9, 10, "two_sided") == pytest.approx(0.6)
    assert fold(10, 10, 10, Alternative.TWO_SIDED) == 1.0


def test_enumeration_constant_outcomes():
    assert enumerate_frt_pvalue(np.ones(4), np.ones(4), [1, 1, 0, 0], StatKind.DISCREPANCY) == 1.0
    assert enumerate_frt_pvalue(np.ones(4), np.ones(4), [1, 1, 0, 0], StatKind.IV) == 1.0


def test_enumeration_size_and_bound():
    _, values = enumerate_frt_distribution(Y6, C6, Z6, StatKind.DISCREPANCY)
    assert values.size == 20 and not np.isnan(values).any()
    with pytest.raises(CombinatorialBoundError):
        enumerate_frt_pvalue(np.zeros(40), np.ones(40), np.r_[np.ones(20), np.zeros(20)], StatKind.ITT)


def test_enumeration_observed_must_be_defined():
    with pytest.raises(NoCompliersInArmError):
        enumerate_frt_pvalue(Y6, [1, 0, 0, 0, 0, 0], Z6, StatKind.DISCREPANCY)


def test_perfect_compliance_statistic_and_discrepancy_agree():
    c = np.ones(6)
    assert enumerate_frt_pvalue(Y6, c, Z6, StatKind.IV) == enumerate_frt_pvalue(Y6, c, Z6, StatKind.DISCREPANCY)


def test_swapping_arms_mirrors_the_pvalue():
    observed, values = enumerate_frt_distribution(Y6, C6, Z6, StatKind.DISCREPANCY)
    ties = np.mean(at_least(values, observed) & at_most(values, observed))
    p = enumerate_frt_pvalue(Y6, C6, Z6, StatKind.DISCREPANCY)
    swapped = enumerate_frt_pvalue(Y6, C6, 1 - Z6, StatKind.DISCREPANCY)
    assert swapped == pytest.approx(1 - p + ties, abs=1e-9)


@pytest.mark.parametrize("kind", [StatKind.DISCREPANCY, StatKind.IV, StatKind.ITT])
def test_monte_carlo_matches_enumeration(kind):
    exact = enumerate_frt_pvalue(Y6, C6, Z6, kind)
    result = permutation_pvalue(Y6, C6, Z6, kind, 10_000, derive_stream(2, f"mc/{kind.value}"))
    assert result.retained_iterations == 10_000
    assert abs(result.p_value - exact) < 0.02


def test_frt_pp_constant_outcomes_never_reject(small_data):
    flat = validate_dataset(small_data.z, small_data.d, np.ones(small_data.n), small_data.x)
    for kind in (StatKind.IV, StatKind.DISCREPANCY):
        result = frt_pp_pvalue(flat, M2, kind, SHORT, derive_stream(3, f"flat/{kind.value}"))
        assert result.p_value == 1.0


def test_frt_pp_bookkeeping_and_determinism(small_data):
    first = frt_pp_pvalue(small_data, M1, "disc", SHORT, derive_stream(4, "pp"))
    second = frt_pp_pvalue(small_data, M1, "disc", SHORT, derive_stream(4, "pp"))
    assert first == second
    assert first.kind is StatKind.DISCREPANCY
    assert first.retained_iterations == SHORT.retained
    assert 0.0 <= first.p_value <= 1.0
    # the p-value is a mean over exactly the non degenerate draws
    hits = first.p_value * first.used_draws
    assert hits == pytest.approx(round(hits))


def test_frt_pp_two_sided_is_at_least_as_large_as_needed(small_data):
    greater = frt_pp_pvalue(small_data, M2, "stat", SHORT, derive_stream(5, "sided"))
    both = frt_pp_pvalue(small_data, M2, "stat", SHORT, derive_stream(5, "sided"),
                         alternative=Alternative.TWO_SIDED)
    assert both.p_value <= min(1.0, 2 * greater.p_value) + 1e-12


def test_frt_pp_without_treated_compliers():
    data = validate_dataset(z=[1, 1, 1, 0, 0, 0], d=[0, 0, 0, 0, 0, 0], y=[1.0, 2.0, 0.5, 1.5, 0.0, 2.5])
    with pytest.raises(AllDrawsDegenerateError):
        frt_pp_pvalue(data, M2, StatKind.IV, SHORT, derive_stream(6, "none"))
    with pytest.raises(AllDrawsDegenerateError):
        frt_pp_pvalue(data, M2, StatKind.DISCREPANCY, SHORT, derive_stream(6, "none"))


def test_frt_pp_rejects_model_kind(small_data):
    with pytest.raises(ValidationError):
        frt_pp_pvalue(small_data, M2, StatKind.MODEL, SHORT, derive_stream(0, "kind"))


def test_model_based_requires_free_effect(small_data):
    with pytest.raises(PostureError):
        model_based_pvalue(small_data, M1, SHORT, derive_stream(0, "model"))


def test_model_based_detects_a_large_effect():
    scenario = ScenarioConfig(eta_c0=-3.0, tau=2.0)
    data, _ = generate(scenario, derive_stream(7, "model/data"))
    chain = ChainConfig(total_iterations=300, burn_in=100)
    result = model_based_pvalue(data, M2, chain, derive_stream(7, "model/chain"))
    assert result.kind is StatKind.MODEL
    assert result.p_value < 0.05
    assert abs(result.estimate - 2.0) < 0.6


def test_itt_permutation_test(small_data):
    result = permutation_pvalue(small_data.y, small_data.d, small_data.z, StatKind.ITT, 500,
                                derive_stream(8, "itt"))
    assert result.degenerate_draws == 0
    assert 0.0 <= result.p_value <= 1.0
    assert result.retained_iterations == 500
