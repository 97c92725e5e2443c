import math
import pytest
import frtpp.api.harness as harness
from frtpp.api import (Checkpoint, Executor, GridSpec, METHODS, Task, chain_label, data_label, load_grid,
                       method_spec, parse_grid, run_grid, run_replication)
from frtpp.dataobj import ReplicationOutcome, StatKind, TestResult, write_results
from frtpp.dataobj.reference import ETA_C0_GRID, HYPOTHESES
from frtpp.error import ChecksumMismatchError, InvalidFormatError, ValidationError

FAST = dict(predictiveness=("none",), eta_c0=(-3.0,), hypotheses=("H0",),
            methods=("m1-stat", "m2-disc", "itt", "known_c-disc", "known_theta-stat", "model"),
            replications=3, iterations=30, burn_in=10, n=80, n_t=40, seed=42)


def _square(x):
    return x * x


def _results_bytes(summaries, path):
    write_results(summaries, path)
    return path.read_bytes()


def test_method_registry():
    assert method_spec("m3-disc").kind is StatKind.DISCREPANCY
    assert method_spec("m3-disc").posture().impose_null
    assert method_spec("model_x").posture().use_covariates
    assert method_spec("itt").kind is StatKind.ITT
    assert method_spec("m2-stat").posture(misspecified=True).misspecified
    assert {"known_c-stat", "known_theta-disc", "model"} <= set(METHODS)
    with pytest.raises(ValidationError):
        method_spec("m9-stat")


def test_grid_defaults_and_validation():
    grid = GridSpec()
    assert len(grid.scenarios()) == 9 * 2
    assert len(grid.method_specs()) == 8
    with pytest.raises(ValidationError):
        GridSpec(methods=())
    with pytest.raises(ValidationError):
        GridSpec(iterations=10, burn_in=20)
    with pytest.raises(ValidationError):
        GridSpec(hypotheses=("H2",))


def test_grid_scenarios_are_ordered():
    grid = GridSpec(predictiveness=("high", "none"), eta_c0=(3.0, -3.0))
    ids = [s.scenario_id for s in grid.scenarios()]
    assert ids[0] == "none_eta-3.0_tau0.0"
    assert ids[-1] == "high_eta+3.0_tau0.5"


def test_checksum_ignores_workers_only():
    grid = GridSpec(**FAST)
    assert grid.checksum() == grid.evolve(workers=4).checksum()
    assert grid.checksum() != grid.evolve(seed=43).checksum()


def test_load_grid(tmp_path):
    path = tmp_path / "grid.toml"
    path.write_text('predictiveness = ["none", "high"]\neta_c0 = [-3, 0, 3]\n'
                    'methods = ["m1-stat", "model"]\nreplications = 10\nseed = 7\ncomplier_share = 0.3\n')
    grid = load_grid(path)
    assert grid.eta_c0 == (-3.0, 0.0, 3.0)
    assert grid.methods == ("m1-stat", "model")
    assert grid.seed == 7
    assert grid.complier_share == 0.3
    assert grid.scenarios()[0].scenario_id.endswith("_pc0.3")


def test_grid_file_errors(tmp_path):
    with pytest.raises(ValidationError) as err:
        parse_grid({"replicates": 3})
    assert err.value.violations[0].startswith("unknown-keys")
    with pytest.raises(ValidationError):
        parse_grid({"replications": "many"})
    path = tmp_path / "grid.toml"
    path.write_text("[chain]\niterations = 10\n")
    with pytest.raises(InvalidFormatError):
        load_grid(path)
    path.write_text("replications = = 3\n")
    with pytest.raises(InvalidFormatError):
        load_grid(path)


def test_executor_inline_and_pool():
    tasks = [Task(_square, (i,), key=i) for i in range(6)]
    inline = Executor()
    assert [o.returned for o in inline.run(tasks)] == [0, 1, 4, 9, 16, 25]
    assert len(inline.history) == 6
    inline.clear()
    assert inline.history == []
    pooled = {o.key: o.returned for o in Executor(max_workers=2).run(tasks)}
    assert pooled == {i: i * i for i in range(6)}
    assert repr(Task(_square, desc="square")) == "<Task: square>"


def test_replication_is_deterministic():
    grid = GridSpec(**FAST)
    scenario = grid.scenarios()[0]
    first = run_replication(scenario, "m2-disc", 1, 42)
    assert first == run_replication(scenario, "m2-disc", 1, 42)
    assert first.rep_index == 1
    assert first.failed or 0.0 <= first.p_value <= 1.0


def test_methods_share_each_replication_dataset(monkeypatch):
    scenario = GridSpec(**FAST).scenarios()[0]
    seen = {}

    def record(spec, scenario, data, truth, stream, priors):
        seen[spec.method] = data
        return TestResult(0.5, spec.kind, 20)

    monkeypatch.setattr(harness, "compute_pvalue", record)
    for method in ("m1-stat", "m1-disc"):
        run_replication(scenario, method, 1, 42)
    assert seen["m1-stat"].same_as(seen["m1-disc"])
    run_replication(scenario, "m1-stat", 2, 42)
    assert not seen["m1-stat"].same_as(seen["m1-disc"])
    assert data_label(scenario, 1) == "none_eta-3.0_tau0.0/rep-1/data"
    assert chain_label(scenario, 1, "m1-disc") != chain_label(scenario, 1, "m1-stat")


def test_grid_rejects_duplicate_scenarios():
    for bad in (dict(eta_c0=(0.0, -0.0)), dict(tau_alternative=0.0)):
        with pytest.raises(ValidationError) as err:
            GridSpec(**bad)
        assert err.value.violations[0].startswith("duplicate-scenarios")
    assert len(GridSpec(eta_c0=(0.01, 0.04), tau_alternative=0.04).scenarios()) == 4


def test_run_grid_summaries(tmp_path):
    grid = GridSpec(**FAST)
    summaries = run_grid(grid)
    assert [s.method for s in summaries] == ["m1-stat", "m2-disc", "known_c-disc", "known_theta-stat",
                                             "model", "itt"]
    for summary in summaries:
        assert summary.replications + summary.failures == 3
        r = summary.rejection_rate
        if summary.replications:
            assert 0.0 <= r <= 1.0
            assert summary.mc_standard_error == pytest.approx(math.sqrt(r * (1 - r) / summary.replications))
        else:
            assert math.isnan(r)


def test_worker_count_does_not_change_results(tmp_path):
    grid = GridSpec(**FAST)
    one = _results_bytes(run_grid(grid), tmp_path / "one.csv")
    two = _results_bytes(run_grid(grid.evolve(workers=2)), tmp_path / "two.csv")
    assert one == two


def test_resume_after_interruption(tmp_path):
    grid = GridSpec(**FAST)
    full = _results_bytes(run_grid(grid), tmp_path / "full.csv")

    checkpoint = tmp_path / "run.jsonl"
    run_grid(grid, checkpoint=checkpoint)
    lines = checkpoint.read_text().splitlines()
    assert len(lines) == 1 + 6 * 3
    # keep half of the cells and a torn final write
    checkpoint.write_text("\n".join(lines[:10]) + "\n" + lines[10][:7])
    resumed = _results_bytes(run_grid(grid, checkpoint=checkpoint), tmp_path / "resumed.csv")
    assert resumed == full
    assert len(checkpoint.read_text().splitlines()) == 1 + 6 * 3


def test_empty_checkpoint_runs_everything(tmp_path):
    grid = GridSpec(**FAST)
    checkpoint = tmp_path / "run.jsonl"
    checkpoint.write_text("")
    assert len(run_grid(grid, checkpoint=checkpoint)) == 6
    assert len(checkpoint.read_text().splitlines()) == 1 + 6 * 3


def test_resume_with_other_grid_fails(tmp_path):
    checkpoint = tmp_path / "run.jsonl"
    Checkpoint(checkpoint, GridSpec(**FAST).checksum()).load()
    with pytest.raises(ChecksumMismatchError):
        run_grid(GridSpec(**FAST).evolve(replications=4), checkpoint=checkpoint)


def test_checkpoint_round_trip(tmp_path):
    record = Checkpoint(tmp_path / "c.jsonl", "abc")
    assert record.load() == {}
    outcome = ReplicationOutcome(2, 0.125, False, 3)
    record.append(("none_eta+0.0_tau0.0", "m1-disc", 2), outcome)
    record.append(("none_eta+0.0_tau0.0", "m1-disc", 3), ReplicationOutcome(3, None, None))
    loaded = Checkpoint(tmp_path / "c.jsonl", "abc").load()
    assert loaded[("none_eta+0.0_tau0.0", "m1-disc", 2)] == outcome
    assert loaded[("none_eta+0.0_tau0.0", "m1-disc", 3)].failed


def _rates(grid):
    return {(s.method, s.scenario.hypothesis, s.scenario.eta_c0): s.rejection_rate
            for s in run_grid(grid.evolve(workers=4))}


def _highest(rates, method, hypothesis):
    return max(r for (m, h, _), r in rates.items() if (m, h) == (method, hypothesis))


@pytest.fixture(scope="module")
def none_rates():
    methods = ("m1-stat", "m2-stat", "m3-stat", "m4-stat", "m1-disc", "m2-disc", "model")
    return _rates(GridSpec(methods=methods, seed=2024))


@pytest.fixture(scope="module")
def high_rates():
    return _rates(GridSpec(predictiveness=("high",), methods=("m4-disc",), seed=2024))


@pytest.mark.slow
def test_statistic_tests_hold_their_level(none_rates):
    for method in ("m1-stat", "m2-stat", "m3-stat", "m4-stat"):
        for eta in (-3.0, 0.0, 3.0):
            assert 0.01 <= none_rates[method, "H0", eta] <= 0.10, (method, eta)


@pytest.mark.slow
def test_null_imputed_discrepancy_is_conservative(none_rates):
    for eta in (-3.0, 0.0, 3.0):
        assert none_rates["m1-disc", "H0", eta] <= 0.04, eta


@pytest.mark.slow
def test_null_imputed_discrepancy_loses_power_near_equal_means(none_rates):
    for eta in (0.0, -0.5):
        assert none_rates["m1-disc", "H1", eta] <= 0.10, eta


@pytest.mark.slow
def test_unconstrained_discrepancy_has_power():
    # complier share of 0.30 for the zero-predictiveness level
    grid = GridSpec(eta_c0=(0.0,), hypotheses=("H1",), methods=("m2-disc",), complier_share=0.30, seed=2024)
    (summary,) = run_grid(grid.evolve(workers=4))
    assert summary.rejection_rate >= 0.40


@pytest.mark.slow
def test_unconstrained_discrepancy_over_rejects_somewhere(none_rates):
    assert _highest(none_rates, "m2-disc", "H0") >= 0.10


@pytest.mark.slow
def test_covariates_improve_validity_and_power(none_rates, high_rates):
    assert _highest(high_rates, "m4-disc", "H0") <= _highest(none_rates, "m2-disc", "H0") - 0.05
    assert high_rates["m4-disc", "H1", 0.0] >= none_rates["m2-disc", "H1", 0.0]


@pytest.mark.slow
def test_model_based_test_tracks_unconstrained_discrepancy(none_rates):
    for hypothesis in HYPOTHESES:
        for eta in ETA_C0_GRID:
            gap = abs(none_rates["model", hypothesis, eta] - none_rates["m2-disc", hypothesis, eta])
            assert gap <= 0.10, (hypothesis, eta)


@pytest.mark.slow
def test_misspecified_model_based_test_over_rejects():
    grid = GridSpec(eta_c0=(-3.0,), hypotheses=("H0",), methods=("model",), misspecified=True, seed=2024)
    (summary,) = run_grid(grid.evolve(workers=4))
    assert summary.rejection_rate >= 0.90


@pytest.mark.slow
def test_misspecified_discrepancy_is_damped():
    rates = _rates(GridSpec(predictiveness=("high",), hypotheses=("H0",), methods=("m4-disc", "model"),
                            misspecified=True, seed=2024))
    assert _highest(rates, "m4-disc", "H0") <= 0.75
    assert _highest(rates, "model", "H0") >= 0.85
