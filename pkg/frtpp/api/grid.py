from __future__ import annotations
import logging
import os
from dataclasses import dataclass, field, fields, asdict, replace
from collections import Counter
from typing import Any, Dict, List, Optional, Tuple, Union
import tomli
from ..dataobj import ScenarioConfig, ChainConfig, Priors, StatKind, ImputationPosture
from ..dataobj.reference import PREDICTIVENESS, ETA_C0_GRID, HYPOTHESES, TAU_ALTERNATIVE
from ..error import ValidationError, InvalidFormatError
from ..helper import stable_digest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MethodSpec:
    """
    How one method id turns a dataset into a p-value.

    Attributes:
        method (str): The id, e.g. "m3-disc".
        kind (StatKind): Test quantity.
        family (str): "m1".."m4", "model", "model_x", "itt", "known_c" or "known_theta".
    """
    method: str
    kind: StatKind
    family: str

    def posture(self, misspecified: bool = False) -> ImputationPosture:
        if self.family in ("m1", "m2", "m3", "m4"):
            return ImputationPosture.from_method(self.family, misspecified)
        if self.family == "model":
            return ImputationPosture(False, False, misspecified)
        if self.family == "model_x":
            return ImputationPosture(False, True, misspecified)
        # oracle imputation draws from the true, correctly specified model
        return ImputationPosture(False, True)


def _build_methods() -> Dict[str, MethodSpec]:
    methods = {}
    for family in ("m1", "m2", "m3", "m4", "known_c", "known_theta"):
        for kind in (StatKind.IV, StatKind.DISCREPANCY):
            method = f"{family}-{kind.value}"
            methods[method] = MethodSpec(method, kind, family)
    methods["model"] = MethodSpec("model", StatKind.MODEL, "model")
    methods["model_x"] = MethodSpec("model_x", StatKind.MODEL, "model_x")
    methods["itt"] = MethodSpec("itt", StatKind.ITT, "itt")
    return methods


# insertion order is the canonical output order of methods
METHODS: Dict[str, MethodSpec] = _build_methods()

DEFAULT_METHODS: Tuple[str, ...] = tuple(f"m{i}-{k}" for k in ("stat", "disc") for i in range(1, 5))


def method_spec(method: str) -> MethodSpec:
    try:
        return METHODS[method]
    except KeyError:
        raise ValidationError([f"unknown-method: {method!r}, expected one of {list(METHODS)}"],
                              context="GridSpec")


@dataclass(frozen=True)
class GridSpec:
    """
    A simulation grid: predictiveness levels x eta_c0 values x hypotheses, each
    analysed by every method over `replications` simulated datasets.

    Attributes:
        predictiveness (tuple): Probit levels.
        eta_c0 (tuple): Control-complier means, eta_n held at `eta_n`.
        hypotheses (tuple): "H0" (tau = 0) and/or "H1" (tau = tau_alternative).
        methods (tuple): Method ids of METHODS.
        misspecified (bool): Analyse with eta_c1 = eta_n imposed.
        replications (int): Datasets per scenario.
        iterations (int): Gibbs sweeps per chain.
        burn_in (int): Discarded sweeps per chain.
        alpha_level (float): Significance level.
        workers (int): Worker processes; never changes the results.
        complier_share (Optional[float]): Recalibrate every level to this marginal complier share.
        seed (int): Base seed of every stream.

    Methods:
    - scenarios: Expand into ScenarioConfig cells.
    - checksum: Digest of everything that affects results.
    """
    predictiveness: Tuple[str, ...] = ("none",)
    eta_c0: Tuple[float, ...] = ETA_C0_GRID
    hypotheses: Tuple[str, ...] = HYPOTHESES
    methods: Tuple[str, ...] = DEFAULT_METHODS
    misspecified: bool = False
    replications: int = 200
    iterations: int = 1000
    burn_in: int = 500
    alpha_level: float = 0.05
    workers: int = 1
    n: int = 500
    n_t: int = 250
    eta_n: float = 0.0
    tau_alternative: float = TAU_ALTERNATIVE
    outcome_variance: float = 1.0
    mean_prior_variance: float = 10.0
    ig_shape: float = 0.1
    ig_rate: float = 0.1
    seed: int = 0
    complier_share: Optional[float] = None

    def __post_init__(self):
        violations = []
        for name in ("predictiveness", "eta_c0", "hypotheses", "methods"):
            if not getattr(self, name):
                violations.append(f"empty-dimension: {name}")
        unknown = [p for p in self.predictiveness if p not in PREDICTIVENESS]
        if unknown:
            violations.append(f"predictiveness: {unknown} not in {list(PREDICTIVENESS)}")
        unknown = [h for h in self.hypotheses if h not in HYPOTHESES]
        if unknown:
            violations.append(f"hypotheses: {unknown} not in {list(HYPOTHESES)}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            violations.append(f"methods: {unknown} not in {list(METHODS)}")
        if self.replications < 1:
            violations.append(f"replications: need >= 1, got {self.replications}")
        if self.workers < 1:
            violations.append(f"workers: need >= 1, got {self.workers}")
        if violations:
            raise ValidationError(violations, context="GridSpec")
        # delegated checks raise on their own
        self.chain
        self.priors
        ids = Counter(s.scenario_id for s in self.scenarios())
        repeated = sorted(i for i, count in ids.items() if count > 1)
        if repeated:
            raise ValidationError([f"duplicate-scenarios: {repeated}"], context="GridSpec")

    @property
    def chain(self) -> ChainConfig:
        return ChainConfig(self.iterations, self.burn_in, self.seed)

    @property
    def priors(self) -> Priors:
        return Priors(self.mean_prior_variance, self.ig_shape, self.ig_rate)

    def scenarios(self) -> List[ScenarioConfig]:
        taus = {"H0": 0.0, "H1": self.tau_alternative}
        cells = [
            ScenarioConfig(n=self.n, n_t=self.n_t, predictiveness=level, eta_n=self.eta_n,
                           eta_c0=float(eta), tau=taus[hypothesis], replications=self.replications,
                           chain=self.chain, alpha_level=self.alpha_level,
                           misspecified=self.misspecified, outcome_variance=self.outcome_variance,
                           complier_share=self.complier_share)
            for level in self.predictiveness
            for hypothesis in self.hypotheses
            for eta in self.eta_c0
        ]
        return sorted(cells, key=lambda s: s.sort_key)

    def method_specs(self) -> List[MethodSpec]:
        order = list(METHODS)
        return [METHODS[m] for m in sorted(set(self.methods), key=order.index)]

    def checksum(self) -> str:
        payload = asdict(self)
        payload.pop("workers")
        return stable_digest(payload)

    def evolve(self, **changes) -> GridSpec:
        return replace(self, **changes)

    def paper_scale(self) -> GridSpec:
        return self.evolve(replications=2000, iterations=2000, burn_in=1000)


_LISTS = {"predictiveness", "eta_c0", "hypotheses", "methods"}


def _coerce(name: str, value: Any, default: Any) -> Any:
    if name in _LISTS:
        value = value if isinstance(value, list) else [value]
        return tuple(float(v) for v in value) if name == "eta_c0" else tuple(str(v) for v in value)
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise TypeError(f"expected true or false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"expected an integer, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"expected a number, got {value!r}")
    return float(value)


def parse_grid(document: Dict[str, Any], context: str = "grid") -> GridSpec:
    defaults = {f.name: getattr(GridSpec, f.name) for f in fields(GridSpec)}
    unknown = sorted(set(document) - set(defaults))
    if unknown:
        raise ValidationError([f"unknown-keys: {unknown}"], context=context)
    values, violations = {}, []
    for name, value in document.items():
        try:
            values[name] = _coerce(name, value, defaults[name])
        except (TypeError, ValueError) as err:
            violations.append(f"bad-value: {name}: {err}")
    if violations:
        raise ValidationError(violations, context=context)
    return GridSpec(**values)


def load_grid(path: Union[str, os.PathLike]) -> GridSpec:
    """
    Read a flat TOML grid file, e.g.

        predictiveness = ["none", "high"]
        eta_c0 = [-3, 0, 3]
        methods = ["m1-stat", "m2-disc", "model"]
        replications = 200
        seed = 42
    """
    with open(path, "rb") as f:
        try:
            document = tomli.load(f)
        except tomli.TOMLDecodeError as err:
            raise InvalidFormatError([f"unreadable-toml: {err}"], context=str(path))
    nested = [k for k, v in document.items() if isinstance(v, dict)]
    if nested:
        raise InvalidFormatError([f"nested-tables: {nested}, the grid file is flat"], context=str(path))
    grid = parse_grid(document, context=str(path))
    logger.info("loaded grid %s: %d scenarios x %d methods x %d replications",
                path, len(grid.scenarios()), len(grid.methods), grid.replications)
    return grid
