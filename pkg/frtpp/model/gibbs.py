from __future__ import annotations
import logging
import os
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union
import numpy as np
import pandas as pd
from scipy.special import expit, log_ndtr, ndtri
from ..dataobj import (ObservedDataset, ComplianceVector, OutcomeParams, ProbitParams,
                       ImputationPosture, Priors, ChainConfig)
from ..error import PostureError
from ..helper import ensure_parent
from ..stats import (RngStream, normal_logpdf, sample_normal, sample_inverse_gamma,
                     sample_signed_truncated_normal, sample_bernoulli)

logger = logging.getLogger(__name__)

Labels = Union[ComplianceVector, np.ndarray]

# unit cells of the outcome model: control compliers, treated compliers, never-takers
_CELLS = ("cc", "tc", "nt")
_VARIANCE_LABEL = {"cc": "c", "tc": "c", "nt": "n"}


@dataclass(frozen=True)
class ChainState:
    """
    One sweep of the data augmentation chain.

    Attributes:
        outcome (OutcomeParams): Outcome parameters drawn in this sweep.
        probit (ProbitParams): Compliance model parameters drawn in this sweep.
        c (ComplianceVector): Labels imputed from those parameters.
        iteration (int): Zero-based sweep index.
    """
    outcome: OutcomeParams
    probit: ProbitParams
    c: ComplianceVector
    iteration: int


def mean_labels(posture: ImputationPosture) -> Dict[str, str]:
    """
    Map each unit cell to the mean parameter it shares under the posture.

    Unconstrained: cc -> c0, tc -> c1, nt -> n. The null pools cc and tc into c;
    the misspecification moves tc (and whatever shares its mean) onto n.
    """
    labels = {"cc": "c0", "tc": "c1", "nt": "n"}
    if posture.impose_null:
        labels["cc"] = labels["tc"] = "c"
    if posture.misspecified:
        shared = labels["tc"]
        labels = {cell: ("n" if label == shared else label) for cell, label in labels.items()}
    return labels


def normal_mean_conditional(sum_y: float, count: int, sigma2: float,
                            prior_variance: float) -> Tuple[float, float]:
    """full conditional (mean, variance) of a N(0, v0) mean given n draws of known variance"""
    precision = count / sigma2 + 1.0 / prior_variance
    return (sum_y / sigma2) / precision, 1.0 / precision

def inverse_gamma_conditional(sum_sq: float, count: int, shape: float,
                              rate: float) -> Tuple[float, float]:
    """full conditional (shape, rate) of an IG(shape, rate) variance given n residuals"""
    return shape + count / 2.0, rate + sum_sq / 2.0


def _labels_array(c: Labels) -> np.ndarray:
    return c.c if isinstance(c, ComplianceVector) else np.asarray(c)

def _cells(data: ObservedDataset, c: np.ndarray) -> Dict[str, np.ndarray]:
    complier = c == 1
    return {
        "cc": data.y[complier & data.control],
        "tc": data.y[complier & data.treated],
        "nt": data.y[~complier],
    }

def _previous_means(previous: Optional[OutcomeParams], cells: Dict[str, np.ndarray],
                    labels: Dict[str, str]) -> Dict[str, float]:
    if previous is not None:
        known = {"c0": previous.eta_c0, "c1": previous.eta_c1, "n": previous.eta_n,
                 "c": previous.complier_control_mean}
        return {label: known[label] for label in set(labels.values())}
    # first sweep: plug in pooled sample means
    means = {}
    for label in set(labels.values()):
        pooled = np.concatenate([cells[cell] for cell in _CELLS if labels[cell] == label])
        means[label] = float(pooled.mean()) if pooled.size else 0.0
    return means


def sample_outcome_params(data: ObservedDataset, c: Labels, posture: ImputationPosture,
                          priors: Priors, stream: RngStream,
                          previous: Optional[OutcomeParams] = None,
                          update_variances: bool = True) -> OutcomeParams:
    """
    Draw outcome variances, then means, from their full conditionals given the labels.

    Parameters:
    - data (ObservedDataset): Observed experiment.
    - c (ComplianceVector or array): Current labels of every unit.
    - posture (ImputationPosture): Decides which cells share a mean.
    - priors (Priors): N(0, v0) means, IG(shape, rate) variances.
    - stream (RngStream): Owned stream.
    - previous (OutcomeParams, optional): Last draw; variances are conditioned on its means.
    - update_variances (bool): Keep the previous variances when False.

    Returns:
    - OutcomeParams honouring the posture constraints. Empty cells leave their
      parameters at a prior draw.
    """
    c = _labels_array(c)
    labels = mean_labels(posture)
    cells = _cells(data, c)
    means = _previous_means(previous, cells, labels)

    if update_variances or previous is None:
        variances = {}
        for group in ("c", "n"):
            members = [cell for cell in _CELLS if _VARIANCE_LABEL[cell] == group]
            sum_sq = sum(float(np.sum((cells[cell] - means[labels[cell]]) ** 2)) for cell in members)
            count = sum(cells[cell].size for cell in members)
            shape, rate = inverse_gamma_conditional(sum_sq, count, priors.ig_shape, priors.ig_rate)
            variances[group] = float(sample_inverse_gamma(stream, shape, rate))
    else:
        variances = {"c": previous.sigma2_c, "n": previous.sigma2_n}

    drawn = {}
    for label in sorted(set(labels.values())):
        members = [cell for cell in _CELLS if labels[cell] == label]
        precision = 1.0 / priors.mean_prior_variance
        weighted = 0.0
        for cell in members:
            sigma2 = variances[_VARIANCE_LABEL[cell]]
            precision += cells[cell].size / sigma2
            weighted += float(cells[cell].sum()) / sigma2
        drawn[label] = float(sample_normal(stream, weighted / precision, 1.0 / precision))

    eta_c0 = drawn[labels["cc"]]
    return OutcomeParams(
        eta_c=eta_c0 if posture.impose_null else None,
        eta_c0=eta_c0,
        eta_c1=drawn[labels["tc"]],
        eta_n=drawn[labels["nt"]],
        sigma2_c=variances["c"],
        sigma2_n=variances["n"],
    )


def _design(x: Optional[np.ndarray], n: int, posture: ImputationPosture) -> np.ndarray:
    if posture.use_covariates:
        if x is None:
            raise PostureError(["covariate-posture: the dataset has no covariate column"])
        return np.column_stack([np.ones(n), x])
    return np.ones((n, 1))


def sample_probit_params(c: Labels, x: Optional[np.ndarray], posture: ImputationPosture,
                         priors: Priors, stream: RngStream,
                         previous: Optional[ProbitParams] = None) -> ProbitParams:
    """
    One latent-utility sweep for the probit compliance model: draw u_i ~ N(x_i'a, 1)
    truncated to the side given by c_i, then a ~ N(V X'u, V) with
    V = (X'X + I / v0)^-1. alpha_x stays 0 when the posture excludes covariates.
    """
    c = _labels_array(c)
    design = _design(x, c.size, posture)
    k = design.shape[1]
    if previous is None:
        beta = np.zeros(k)
    else:
        beta = np.array([previous.alpha_0, previous.alpha_x][:k])

    utilities = sample_signed_truncated_normal(stream, design @ beta, c == 1)
    precision = design.T @ design + np.eye(k) / priors.mean_prior_variance
    covariance = np.linalg.inv(precision)
    center = covariance @ (design.T @ utilities)
    beta = center + np.linalg.cholesky(covariance) @ sample_normal(stream, 0.0, 1.0, size=k)
    return ProbitParams(float(beta[0]), float(beta[1]) if k == 2 else 0.0)


def complier_probabilities(data: ObservedDataset, outcome: OutcomeParams, probit: ProbitParams,
                           posture: ImputationPosture) -> np.ndarray:
    """
    Posterior probability of being a complier for every control unit, evaluated
    as expit of the log odds so extreme outcomes never give 0/0.
    """
    control = data.control
    y = data.y[control]
    x = data.x[control] if (posture.use_covariates and data.has_covariate) else None
    linear = probit.linear_predictor(x, y.size)
    log_complier = normal_logpdf(y, outcome.complier_control_mean, outcome.sigma2_c) + log_ndtr(linear)
    log_never = normal_logpdf(y, outcome.eta_n, outcome.sigma2_n) + log_ndtr(-linear)
    return expit(log_complier - log_never)


def impute_compliance(data: ObservedDataset, outcome: OutcomeParams, probit: ProbitParams,
                      posture: ImputationPosture, stream: RngStream) -> ComplianceVector:
    p = complier_probabilities(data, outcome, probit, posture)
    return ComplianceVector.from_dataset(data, sample_bernoulli(stream, p))


def run_chain(data: ObservedDataset, posture: ImputationPosture, priors: Priors,
              chain: ChainConfig, stream: RngStream,
              observer: Optional[Callable[[ChainState], None]] = None,
              fixed_params: Optional[Tuple[OutcomeParams, ProbitParams]] = None) -> Iterator[ChainState]:
    """
    Two-stage Gibbs sampler over (theta, C), yielding every sweep.

    Control labels start as Bernoulli(p_c) with p_c the receipt rate of the treated
    arm. Each sweep draws outcome parameters, then probit parameters, then imputes
    control labels. `observer` is called once per sweep with the new state.
    With `fixed_params` both parameter steps are skipped and labels are imputed from
    the given values on every sweep.
    """
    data.require_both_arms()
    if posture.use_covariates and not data.has_covariate:
        raise PostureError(["covariate-posture: the dataset has no covariate column"])
    n_control = int(data.control.sum())
    p_hat = float(data.d[data.treated].mean())
    c = ComplianceVector.from_dataset(data, sample_bernoulli(stream, np.full(n_control, p_hat)))

    if fixed_params is not None:
        outcome, probit = fixed_params
    else:
        outcome = None
        probit = ProbitParams(float(ndtri(np.clip(p_hat, 0.01, 0.99))), 0.0)

    logger.debug("chain start: %s, posture=%s, p_hat=%.3f", data, posture, p_hat)
    for iteration in range(chain.total_iterations):
        if fixed_params is None:
            outcome = sample_outcome_params(data, c, posture, priors, stream, previous=outcome)
            probit = sample_probit_params(c, data.x, posture, priors, stream, previous=probit)
        c = impute_compliance(data, outcome, probit, posture, stream)
        state = ChainState(outcome, probit, c, iteration)
        if observer is not None:
            observer(state)
        yield state


class TraceRecorder:
    """
    Chain observer collecting one diagnostics row per sweep.

    Methods:
        to_frame: Returns the trace as a DataFrame.
        write: Writes the trace CSV.
    """
    columns = ("iteration", "eta_c", "eta_c0", "eta_c1", "eta_n", "sigma2_c", "sigma2_n",
               "alpha_0", "alpha_x", "n_imputed_compliers")

    def __init__(self, data: ObservedDataset):
        self.control = data.control
        self.rows: List[tuple] = []

    def __call__(self, state: ChainState):
        o, p = state.outcome, state.probit
        self.rows.append((state.iteration, o.eta_c, o.eta_c0, o.eta_c1, o.eta_n, o.sigma2_c,
                          o.sigma2_n, p.alpha_0, p.alpha_x,
                          int(state.c.c[self.control].sum())))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=list(self.columns))

    def write(self, path: Union[str, os.PathLike]):
        self.to_frame().to_csv(ensure_parent(path), index=False, lineterminator="\n")
