from __future__ import annotations
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple
from scipy.special import ndtri
from .params import ChainConfig
from .reference import PREDICTIVENESS
from ..error import ValidationError


def _signed(value: float) -> str:
    # repr keeps every digit, so distinct floats never share an id
    value = float(value) + 0.0
    return f"+{value!r}" if value >= 0 else repr(value)


@dataclass(frozen=True)
class ScenarioConfig:
    """
    One cell of the simulation design.

    Attributes:
        n (int): Number of units.
        n_t (int): Number of treated units.
        predictiveness (str): Probit level, a key of PREDICTIVENESS.
        eta_n (float): Never-taker outcome mean.
        eta_c0 (float): Control-complier outcome mean.
        tau (float): Constant complier effect, 0 under H0.
        replications (int): Simulated datasets per method.
        chain (ChainConfig): Gibbs chain length.
        alpha_level (float): Significance level.
        misspecified (bool): Analyse with eta_c1 = eta_n imposed.
        outcome_variance (float): Outcome variance of the generating model.
        complier_share (Optional[float]): When set, the probit intercept is moved so the
            marginal complier share equals this value; the slope of the level is kept.
    """
    n: int = 500
    n_t: int = 250
    predictiveness: str = "none"
    eta_n: float = 0.0
    eta_c0: float = 0.0
    tau: float = 0.0
    replications: int = 200
    chain: ChainConfig = field(default_factory=ChainConfig)
    alpha_level: float = 0.05
    misspecified: bool = False
    outcome_variance: float = 1.0
    complier_share: Optional[float] = None

    def __post_init__(self):
        violations = []
        if not 0 < self.n_t < self.n:
            violations.append(f"arm-size: need 0 < n_t < n, got n={self.n}, n_t={self.n_t}")
        if self.replications < 1:
            violations.append(f"replications: need >= 1, got {self.replications}")
        if not 0 < self.alpha_level < 1:
            violations.append(f"alpha-level: need a value in (0, 1), got {self.alpha_level}")
        if self.predictiveness not in PREDICTIVENESS:
            violations.append(f"predictiveness: {self.predictiveness!r} not in {sorted(PREDICTIVENESS)}")
        if not self.outcome_variance > 0:
            violations.append(f"outcome-variance: need > 0, got {self.outcome_variance}")
        if self.complier_share is not None and not 0 < self.complier_share < 1:
            violations.append(f"complier-share: need a value in (0, 1), got {self.complier_share}")
        if violations:
            raise ValidationError(violations, context="ScenarioConfig")

    @property
    def alpha(self) -> Tuple[float, float]:
        """probit (alpha_0, alpha_x) of the level, intercept recalibrated when complier_share is set"""
        alpha_0, alpha_x = PREDICTIVENESS[self.predictiveness].pair
        if self.complier_share is None:
            return alpha_0, alpha_x
        # E[Phi(a0 + ax X)] = Phi(a0 / sqrt(1 + ax^2)) for a standard normal X
        return float(ndtri(self.complier_share)) * math.sqrt(1.0 + alpha_x ** 2), alpha_x

    @property
    def hypothesis(self) -> str:
        return "H0" if self.tau == 0 else "H1"

    @property
    def scenario_id(self) -> str:
        parts = [f"{self.predictiveness}_eta{_signed(self.eta_c0)}_tau{float(self.tau) + 0.0!r}"]
        if self.eta_n != 0:
            parts.append(f"_etan{_signed(self.eta_n)}")
        if self.complier_share is not None:
            parts.append(f"_pc{float(self.complier_share)!r}")
        if self.misspecified:
            parts.append("_mis")
        return "".join(parts)

    @property
    def sort_key(self) -> tuple:
        order = list(PREDICTIVENESS)
        return (order.index(self.predictiveness), self.misspecified, self.tau, self.eta_c0)

    def evolve(self, **changes) -> ScenarioConfig:
        return replace(self, **changes)
