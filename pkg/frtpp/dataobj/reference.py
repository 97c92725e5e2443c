from dataclasses import dataclass
from typing import Dict, Tuple

@dataclass(frozen=True)
class PredictivenessRef:
    """
    Probit coefficients of one level of covariate predictiveness.

    Attributes:
        name (str): The level name ("none", "medium", "high").
        alpha_0 (float): Probit intercept.
        alpha_x (float): Probit slope on the standard normal covariate.

    Methods:
        pair: Returns (alpha_0, alpha_x).
    """
    name: str
    alpha_0: float
    alpha_x: float

    @property
    def pair(self) -> Tuple[float, float]:
        return self.alpha_0, self.alpha_x


PREDICTIVENESS: Dict[str, PredictivenessRef] = {
    ref.name: ref for ref in (
        PredictivenessRef("none", -0.8, 0.0),
        PredictivenessRef("medium", -1.4, 2.0),
        PredictivenessRef("high", -2.8, 5.0),
    )
}

# control complier means of the simulation grid, never-taker mean fixed at 0
ETA_C0_GRID: Tuple[float, ...] = (-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)

HYPOTHESES: Tuple[str, ...] = ("H0", "H1")
TAU_ALTERNATIVE = 0.5
