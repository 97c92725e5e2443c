import logging
from typing import Callable, Optional, Tuple, Union
import numpy as np
from .statistic import Labels, replicate_values, at_least, at_most
from ..dataobj import (ObservedDataset, ImputationPosture, ChainConfig, Priors, OutcomeParams,
                       ProbitParams, StatKind, Alternative, TestResult)
from ..error import AllDrawsDegenerateError, PostureError, ValidationError
from ..model import ChainState, run_chain
from ..stats import RngStream, sample_permutation

logger = logging.getLogger(__name__)

# assignments per matrix block of the known-compliance Monte Carlo loop
_BLOCK = 1024


def fold(upper: int, lower: int, used: int, alternative: Union[Alternative, str]) -> float:
    """
    Turn exceedance counts into a p-value.

    `upper` counts replicates >= observed and `lower` counts replicates <= observed,
    ties counted on both sides.
    """
    if Alternative(alternative) is Alternative.TWO_SIDED:
        return min(1.0, 2.0 * min(upper, lower) / used)
    return upper / used


def _randomization_kind(kind: Union[StatKind, str]) -> StatKind:
    kind = StatKind(kind)
    if kind is StatKind.MODEL:
        raise ValidationError(["kind: model-based tests go through model_based_pvalue"],
                              context="frt")
    return kind


def frt_pp_pvalue(data: ObservedDataset, posture: ImputationPosture, kind: Union[StatKind, str],
                  chain: ChainConfig, stream: RngStream, priors: Priors = Priors(),
                  alternative: Union[Alternative, str] = Alternative.GREATER,
                  fixed_params: Optional[Tuple[OutcomeParams, ProbitParams]] = None,
                  observer: Optional[Callable[[ChainState], None]] = None) -> TestResult:
    """
    Posterior predictive randomization test.

    Each retained sweep of the imputation chain contributes one indicator: the
    test quantity under one fresh random assignment, with the imputed labels held
    fixed, compared with its observed value. The IV statistic is observed once;
    the discrepancy depends on the labels and is re-evaluated every sweep.

    Parameters:
    - data (ObservedDataset): Observed experiment, both arms non-empty.
    - posture (ImputationPosture): How control labels are imputed.
    - kind (StatKind): IV statistic, discrepancy or ITT.
    - chain (ChainConfig): Sweeps and burn-in.
    - stream (RngStream): Owned by this computation; drives the chain and the permutations.
    - priors (Priors): Imputation model priors.
    - alternative (Alternative): One-sided toward positive effects, or two-sided.
    - fixed_params (tuple, optional): Impute from these parameters instead of sampling them.
    - observer (callable, optional): Called with every chain state, e.g. a TraceRecorder.

    Returns:
    - TestResult; draws where a quantity is undefined are dropped and counted.

    Raises:
    - AllDrawsDegenerateError: No retained draw produced a defined comparison.
    """
    kind = _randomization_kind(kind)
    data.require_both_arms()
    y, z = data.y, data.z
    observed = None
    if kind is not StatKind.DISCREPANCY:
        # D = C Z on treated units, so any labels consistent with the data give the observed IV value
        observed = float(replicate_values(kind, y, data.d, z)[0])
        if np.isnan(observed):
            raise AllDrawsDegenerateError("observed IV statistic is undefined: no treated compliers")

    upper = lower = degenerate = 0
    for state in run_chain(data, posture, priors, chain, stream, observer=observer,
                           fixed_params=fixed_params):
        if state.iteration < chain.burn_in:
            continue
        c = state.c.c
        value = observed
        if value is None:
            value = float(replicate_values(kind, y, c, z)[0])
        replicate = float(replicate_values(kind, y, c, sample_permutation(stream, data.n, data.n_t))[0])
        if np.isnan(value) or np.isnan(replicate):
            degenerate += 1
            continue
        upper += int(at_least(replicate, value))
        lower += int(at_most(replicate, value))

    used = chain.retained - degenerate
    if used == 0:
        raise AllDrawsDegenerateError(f"all {chain.retained} retained draws were degenerate")
    if degenerate:
        logger.debug("%s: %d of %d retained draws degenerate", kind.value, degenerate, chain.retained)
    return TestResult(fold(upper, lower, used, alternative), kind, chain.retained, degenerate)


def model_based_pvalue(data: ObservedDataset, posture: ImputationPosture, chain: ChainConfig,
                       stream: RngStream, priors: Priors = Priors(),
                       alternative: Union[Alternative, str] = Alternative.GREATER,
                       observer: Optional[Callable[[ChainState], None]] = None) -> TestResult:
    """
    Posterior tail probability of a non-positive complier effect,
    Pr(eta_c1 - eta_c0 <= 0 | data), so that small values reject. The posterior mean
    of the effect is reported as the estimate.
    """
    if posture.impose_null:
        raise PostureError(["impose-null: the model-based test reads the unconstrained posterior"],
                           context="model_based_pvalue")
    effects = np.array([state.outcome.eta_c1 - state.outcome.eta_c0
                        for state in run_chain(data, posture, priors, chain, stream, observer=observer)
                        if state.iteration >= chain.burn_in])
    lower = int(np.sum(effects <= 0))
    upper = int(np.sum(effects >= 0))
    # orientation is flipped: the effect plays the role of the observed-minus-replicate gap
    p_value = fold(lower, upper, effects.size, alternative)
    return TestResult(p_value, StatKind.MODEL, chain.retained, 0, estimate=float(effects.mean()))


def permutation_pvalue(y: np.ndarray, c: Labels, z: np.ndarray, kind: Union[StatKind, str],
                       draws: int, stream: RngStream,
                       alternative: Union[Alternative, str] = Alternative.GREATER) -> TestResult:
    """
    Monte Carlo randomization test with every compliance label known, one random
    assignment per draw. The observed value comes from the same labels.
    """
    kind = _randomization_kind(kind)
    z = np.asarray(z)
    n, n_t = z.size, int(z.sum())
    if draws < 1:
        raise ValueError(f"draws must be positive, got {draws}")
    observed = float(replicate_values(kind, y, c, z)[0])
    if np.isnan(observed):
        raise AllDrawsDegenerateError(f"observed {kind.value} is undefined for the given labels")

    upper = lower = degenerate = 0
    for start in range(0, draws, _BLOCK):
        block = np.stack([sample_permutation(stream, n, n_t) for _ in range(min(_BLOCK, draws - start))])
        values = replicate_values(kind, y, c, block)
        defined = ~np.isnan(values)
        degenerate += int(np.sum(~defined))
        upper += int(np.sum(at_least(values[defined], observed)))
        lower += int(np.sum(at_most(values[defined], observed)))

    used = draws - degenerate
    if used == 0:
        raise AllDrawsDegenerateError(f"all {draws} permutations were degenerate")
    return TestResult(fold(upper, lower, used, alternative), kind, draws, degenerate)
