import logging
import os
from typing import Dict, List, Optional, Union
from .checkpoint import Checkpoint, CellKey
from .executor import Executor, Task
from .grid import GridSpec, MethodSpec, method_spec
from ..dataobj import (ScenarioConfig, ObservedDataset, TruthRecord, Priors, StatKind, TestResult,
                       ReplicationOutcome, RejectionSummary)
from ..error import AllDrawsDegenerateError
from ..frt import frt_pp_pvalue, model_based_pvalue, permutation_pvalue
from ..model import generate, true_params
from ..stats import RngStream, derive_stream

logger = logging.getLogger(__name__)


def data_label(scenario: ScenarioConfig, rep_index: int) -> str:
    # shared by every method so all of them analyse the same dataset
    return f"{scenario.scenario_id}/rep-{rep_index}/data"

def chain_label(scenario: ScenarioConfig, rep_index: int, method: str) -> str:
    return f"{scenario.scenario_id}/rep-{rep_index}/{method}/chain"


def compute_pvalue(spec: MethodSpec, scenario: ScenarioConfig, data: ObservedDataset,
                   truth: TruthRecord, stream: RngStream, priors: Priors = Priors()) -> TestResult:
    """Dispatch one method onto one simulated dataset."""
    chain = scenario.chain
    if spec.family == "itt":
        return permutation_pvalue(data.y, data.d, data.z, StatKind.ITT, chain.retained, stream)
    if spec.family == "known_c":
        return permutation_pvalue(data.y, truth.c_true, data.z, spec.kind, chain.retained, stream)
    posture = spec.posture(scenario.misspecified)
    if spec.kind is StatKind.MODEL:
        return model_based_pvalue(data, posture, chain, stream, priors)
    fixed = true_params(scenario, use_covariates=True) if spec.family == "known_theta" else None
    return frt_pp_pvalue(data, posture, spec.kind, chain, stream, priors, fixed_params=fixed)


def run_replication(scenario: ScenarioConfig, method: str, rep_index: int, base_seed: int,
                    priors: Priors = Priors()) -> ReplicationOutcome:
    """
    Simulate replication `rep_index` of a scenario and test it with one method.

    The dataset stream depends only on (base_seed, scenario, rep_index); the
    chain stream adds the method. A replication where every draw is degenerate is
    returned as a failed outcome instead of raising.
    """
    spec = method_spec(method)
    data, truth = generate(scenario, derive_stream(base_seed, data_label(scenario, rep_index)))
    stream = derive_stream(base_seed, chain_label(scenario, rep_index, method))
    try:
        result = compute_pvalue(spec, scenario, data, truth, stream, priors)
    except AllDrawsDegenerateError as err:
        logger.warning("%s rep %d %s failed: %s", scenario.scenario_id, rep_index, method, err)
        return ReplicationOutcome(rep_index, None, None)
    return ReplicationOutcome(rep_index, result.p_value, result.reject(scenario.alpha_level),
                              result.degenerate_draws)


def run_grid(grid: GridSpec, checkpoint: Optional[Union[str, os.PathLike]] = None) -> List[RejectionSummary]:
    """
    Run every (scenario, method, replication) cell of a grid and aggregate rejection rates.

    Parameters:
    - grid (GridSpec): The design; `grid.workers` sets the process count.
    - checkpoint (path, optional): JSON lines file; finished cells found there are skipped
      and new ones are appended as they complete.

    Returns:
    - RejectionSummary per (scenario, method), in scenario order then method order.
      The result depends on the grid and its seed only.
    """
    scenarios = grid.scenarios()
    specs = grid.method_specs()
    record = Checkpoint(checkpoint, grid.checksum()) if checkpoint is not None else None
    done: Dict[CellKey, ReplicationOutcome] = record.load() if record is not None else {}

    tasks = []
    for scenario in scenarios:
        for spec in specs:
            for rep in range(grid.replications):
                key = (scenario.scenario_id, spec.method, rep)
                if key in done:
                    continue
                tasks.append(Task(run_replication, (scenario, spec.method, rep, grid.seed, grid.priors),
                                  key=key, desc=f"{key[0]} {key[1]} rep-{rep}"))

    total = len(scenarios) * len(specs) * grid.replications
    logger.info("running %d of %d cells on %d worker(s)", len(tasks), total, grid.workers)
    executor = Executor(max_workers=grid.workers)
    step = max(1, len(tasks) // 10)
    for count, output in enumerate(executor.run(tasks), start=1):
        done[output.key] = output.returned
        if record is not None:
            record.append(output.key, output.returned)
        if count % step == 0:
            logger.info("%d / %d cells done", count, len(tasks))
    executor.clear()

    summaries = []
    for scenario in scenarios:
        for spec in specs:
            outcomes = [done[(scenario.scenario_id, spec.method, rep)] for rep in range(grid.replications)]
            summary = RejectionSummary.from_outcomes(scenario, spec.method, spec.kind, outcomes)
            if summary.failures:
                logger.warning("%s %s: %d of %d replications failed", scenario.scenario_id,
                               spec.method, summary.failures, grid.replications)
            summaries.append(summary)
    return summaries
