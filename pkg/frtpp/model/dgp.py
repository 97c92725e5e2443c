import logging
from typing import Sequence, Tuple
import numpy as np
from scipy.special import ndtr, ndtri
from ..dataobj import (ObservedDataset, TruthRecord, ComplianceVector, ScenarioConfig,
                       OutcomeParams, ProbitParams, validate_dataset)
from ..stats import RngStream, sample_normal, sample_permutation

logger = logging.getLogger(__name__)


def marginal_complier_rate(alpha: Sequence[float]) -> float:
    """
    Share of compliers implied by the probit model with a standard normal covariate:
    E[Phi(a0 + ax X)] = Phi(a0 / sqrt(1 + ax^2)).
    """
    alpha_0, alpha_x = alpha
    return float(ndtr(alpha_0 / np.sqrt(1.0 + alpha_x ** 2)))


def generate(cfg: ScenarioConfig, stream: RngStream) -> Tuple[ObservedDataset, TruthRecord]:
    """
    Simulate one completely randomized experiment with one-sided noncompliance.

    Parameters:
    - cfg (ScenarioConfig): Sizes, probit level, outcome means and complier effect.
    - stream (RngStream): Owned stream, consumed in a fixed order
      (covariate, probit noise, outcomes, assignment).

    Returns:
    - (ObservedDataset, TruthRecord): The analyst's view and the hidden truth.
    """
    n = cfg.n
    alpha_0, alpha_x = cfg.alpha

    x = sample_normal(stream, 0.0, 1.0, size=n)
    noise = sample_normal(stream, 0.0, 1.0, size=n)
    c = (alpha_0 + alpha_x * x + noise > 0).astype(np.int8)

    # exclusion restriction: never-takers keep y0 under both arms
    y0 = sample_normal(stream, np.where(c == 1, cfg.eta_c0, cfg.eta_n), cfg.outcome_variance)
    y1 = y0 + cfg.tau * c

    z = sample_permutation(stream, n, cfg.n_t)
    d = c * z
    y = np.where(z == 1, y1, y0)

    data = validate_dataset(z, d, y, x)
    truth = TruthRecord(ComplianceVector.checked(c, data), y0, y1)
    logger.debug("generated %s for %s (compliers=%d)", data, cfg.scenario_id, int(c.sum()))
    return data, truth


def true_params(cfg: ScenarioConfig, use_covariates: bool = True) -> Tuple[OutcomeParams, ProbitParams]:
    """
    Parameters of the generating model, in the form the imputer consumes.

    Without covariates the probit intercept is the one reproducing the marginal
    complier share, Phi^-1(pi_c), and alpha_x is 0.
    """
    outcome = OutcomeParams(
        eta_c=None,
        eta_c0=cfg.eta_c0,
        eta_c1=cfg.eta_c0 + cfg.tau,
        eta_n=cfg.eta_n,
        sigma2_c=cfg.outcome_variance,
        sigma2_n=cfg.outcome_variance,
    )
    if use_covariates:
        probit = ProbitParams(*cfg.alpha)
    else:
        probit = ProbitParams(float(ndtri(marginal_complier_rate(cfg.alpha))), 0.0)
    return outcome, probit
