from __future__ import annotations
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence
from .scenario import ScenarioConfig


class StatKind(str, Enum):
    IV = "stat"
    DISCREPANCY = "disc"
    ITT = "itt"
    MODEL = "model"


class Alternative(str, Enum):
    GREATER = "greater"
    TWO_SIDED = "two_sided"


@dataclass(frozen=True)
class TestResult:
    """
    One p-value and its bookkeeping.

    Attributes:
        p_value (float): The p-value in [0, 1].
        kind (StatKind): Which test quantity produced it.
        retained_iterations (int): Post burn-in iterations (or permutation draws).
        degenerate_draws (int): Retained draws where the test quantity was undefined.
        estimate (Optional[float]): Posterior mean of eta_c1 - eta_c0 for model-based tests.
    """
    __test__ = False  # not a pytest class

    p_value: float
    kind: StatKind
    retained_iterations: int
    degenerate_draws: int = 0
    estimate: Optional[float] = None

    @property
    def used_draws(self) -> int:
        return self.retained_iterations - self.degenerate_draws

    def reject(self, alpha_level: float) -> bool:
        return self.p_value <= alpha_level


@dataclass(frozen=True)
class ReplicationOutcome:
    """result of one (scenario, method, replication) cell"""
    rep_index: int
    p_value: Optional[float]
    reject: Optional[bool]
    degenerate_draws: int = 0

    @property
    def failed(self) -> bool:
        return self.p_value is None


@dataclass(frozen=True)
class RejectionSummary:
    """
    Rejection rate of one method in one scenario.

    Attributes:
        scenario (ScenarioConfig): The simulated scenario.
        method (str): Method id, e.g. "m2-disc" or "model_x".
        kind (StatKind): Test quantity of the method.
        rejection_rate (float): Share of successful replications that rejected.
        mc_standard_error (float): sqrt(r (1 - r) / replications).
        replications (int): Successful replications.
        mean_degenerate_draws (float): Average degenerate draws per replication.
        failures (int): Replications where every draw was degenerate.
    """
    scenario: ScenarioConfig
    method: str
    kind: StatKind
    rejection_rate: float
    mc_standard_error: float
    replications: int
    mean_degenerate_draws: float = 0.0
    failures: int = 0

    @classmethod
    def from_outcomes(cls, scenario: ScenarioConfig, method: str, kind: StatKind,
                      outcomes: Sequence[ReplicationOutcome]) -> RejectionSummary:
        done = sorted((o for o in outcomes if not o.failed), key=lambda o: o.rep_index)
        reps = len(done)
        if reps:
            rate = sum(1 for o in done if o.reject) / reps
            degenerate = sum(o.degenerate_draws for o in done) / reps
        else:
            rate, degenerate = float("nan"), float("nan")
        se = math.sqrt(rate * (1.0 - rate) / reps) if reps else float("nan")
        return cls(scenario, method, kind, rate, se, reps, degenerate, len(outcomes) - reps)

    @property
    def scenario_id(self) -> str:
        return self.scenario.scenario_id

    @property
    def method_family(self) -> str:
        # "m2-disc" -> "m2", "model_x" -> "model_x"
        return self.method.split("-", 1)[0]

    def as_row(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "predictiveness": self.scenario.predictiveness,
            "eta_c0": self.scenario.eta_c0,
            "eta_n": self.scenario.eta_n,
            "tau": self.scenario.tau,
            "misspecified": int(self.scenario.misspecified),
            "method": self.method_family,
            "kind": self.kind.value,
            "replications": self.replications,
            "rejection_rate": self.rejection_rate,
            "mc_se": self.mc_standard_error,
            "mean_degenerate_draws": self.mean_degenerate_draws,
        }
