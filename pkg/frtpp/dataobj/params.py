from __future__ import annotations
from dataclasses import dataclass
from typing import List, Optional
import numpy as np
from ..error import ValidationError, PostureError

_METHODS = {
    "m1": (True, False),
    "m2": (False, False),
    "m3": (True, True),
    "m4": (False, True),
}


@dataclass(frozen=True)
class ImputationPosture:
    """
    How control-arm compliance labels are imputed.

    Attributes:
        impose_null (bool): Pool complier means across arms (eta_c0 = eta_c1 = eta_c).
        use_covariates (bool): Let the probit compliance model use the covariate.
        misspecified (bool): Force treated compliers to share the never-taker mean (eta_c1 = eta_n).
    """
    impose_null: bool
    use_covariates: bool
    misspecified: bool = False

    @classmethod
    def from_method(cls, method: str, misspecified: bool = False) -> ImputationPosture:
        try:
            impose_null, use_covariates = _METHODS[method]
        except KeyError:
            raise PostureError([f"unknown-method: {method!r}, expected one of {sorted(_METHODS)}"])
        return cls(impose_null, use_covariates, misspecified)

    @property
    def method(self) -> str:
        return {v: k for k, v in _METHODS.items()}[(self.impose_null, self.use_covariates)]


@dataclass(frozen=True)
class Priors:
    """
    Priors of the imputation model: N(0, v0) on every mean and probit coefficient,
    IG(shape, rate) on both outcome variances. v0 is a variance.
    """
    mean_prior_variance: float = 10.0
    ig_shape: float = 0.1
    ig_rate: float = 0.1

    def __post_init__(self):
        bad = [f"non-positive-prior: {k}={v}" for k, v in vars(self).items() if not v > 0]
        if bad:
            raise ValidationError(bad, context="Priors")


@dataclass(frozen=True)
class ChainConfig:
    total_iterations: int = 2000
    burn_in: int = 1000
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.burn_in < self.total_iterations:
            raise ValidationError([f"burn-in: need 0 <= burn_in < total_iterations, "
                                   f"got {self.burn_in} and {self.total_iterations}"],
                                  context="ChainConfig")

    @property
    def retained(self) -> int:
        return self.total_iterations - self.burn_in


@dataclass(frozen=True)
class OutcomeParams:
    """
    Normal outcome model state.

    Attributes:
        eta_c (Optional[float]): Pooled complier mean, only set when the null is imposed.
        eta_c0 (float): Control-complier mean.
        eta_c1 (float): Treated-complier mean.
        eta_n (float): Never-taker mean, shared by both arms.
        sigma2_c (float): Complier outcome variance.
        sigma2_n (float): Never-taker outcome variance.
    """
    eta_c: Optional[float]
    eta_c0: float
    eta_c1: float
    eta_n: float
    sigma2_c: float
    sigma2_n: float

    def __post_init__(self):
        bad = [f"non-positive-variance: {k}={getattr(self, k)}"
               for k in ("sigma2_c", "sigma2_n") if not getattr(self, k) > 0]
        if bad:
            raise ValidationError(bad, context="OutcomeParams")

    @property
    def complier_control_mean(self) -> float:
        """complier mean used when imputing control-arm labels"""
        return self.eta_c if self.eta_c is not None else self.eta_c0

    def violations(self, posture: ImputationPosture) -> List[str]:
        found = []
        if posture.impose_null and not (self.eta_c == self.eta_c0 == self.eta_c1):
            found.append("null-posture: eta_c0, eta_c1 and eta_c differ")
        if posture.misspecified and self.eta_c1 != self.eta_n:
            found.append("misspecified-posture: eta_c1 differs from eta_n")
        return found


@dataclass(frozen=True)
class ProbitParams:
    alpha_0: float
    alpha_x: float = 0.0

    def linear_predictor(self, x: Optional[np.ndarray], n: int) -> np.ndarray:
        if x is None or self.alpha_x == 0.0:
            return np.full(n, self.alpha_0)
        return self.alpha_0 + self.alpha_x * x

    def violations(self, posture: ImputationPosture) -> List[str]:
        if not posture.use_covariates and self.alpha_x != 0.0:
            return ["covariate-posture: alpha_x must be 0 without covariates"]
        return []
