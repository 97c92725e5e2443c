from __future__ import annotations
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union
import numpy as np
from ..error import ValidationError

ArrayInput = Union[Sequence[float], np.ndarray]


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, copy=True)
    values.flags.writeable = False
    return values

def _units(mask: np.ndarray, limit: int = 10) -> str:
    idx = np.flatnonzero(mask)
    shown = ", ".join(str(i) for i in idx[:limit])
    return f"[{shown}{', ...' if idx.size > limit else ''}] ({idx.size} units)"

def _binary_violations(name: str, values: np.ndarray) -> List[str]:
    bad = ~np.isin(values, (0.0, 1.0))
    if np.any(bad):
        return [f"non-binary-{name}: values outside {{0,1}} at units {_units(bad)}"]
    return []


@dataclass(frozen=True, eq=False)
class ObservedDataset:
    """
    The experiment as the analyst sees it.

    Attributes:
        z (np.ndarray): Assignment indicators, int8.
        d (np.ndarray): Treatment receipt indicators, int8.
        y (np.ndarray): Observed outcomes, float64.
        x (Optional[np.ndarray]): Optional covariate, float64.

    Methods:
        n: Number of units.
        n_t: Number of units assigned to treatment.
        require_both_arms: Raise unless both arms hold at least one unit.
        same_as: Bitwise equality on every field.
    """
    z: np.ndarray
    d: np.ndarray
    y: np.ndarray
    x: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return int(self.z.size)

    @property
    def n_t(self) -> int:
        return int(self.z.sum())

    @property
    def treated(self) -> np.ndarray:
        return self.z == 1

    @property
    def control(self) -> np.ndarray:
        return self.z == 0

    @property
    def has_covariate(self) -> bool:
        return self.x is not None

    def require_both_arms(self) -> ObservedDataset:
        if not 0 < self.n_t < self.n:
            raise ValidationError([f"empty-arm: need 0 < n_t < n, got n={self.n}, n_t={self.n_t}"],
                                  context="ObservedDataset")
        return self

    def same_as(self, other: ObservedDataset) -> bool:
        fields = [(self.z, other.z), (self.d, other.d), (self.y, other.y)]
        if (self.x is None) != (other.x is None):
            return False
        if self.x is not None:
            fields.append((self.x, other.x))
        return all(a.dtype == b.dtype and np.array_equal(a.view(np.uint8), b.view(np.uint8))
                   for a, b in fields)

    def __repr__(self):
        covariate = ", x" if self.has_covariate else ""
        return f"ObservedDataset(n={self.n}, n_t={self.n_t}, compliers_treated={int(self.d.sum())}{covariate})"


def validate_dataset(z: ArrayInput, d: ArrayInput, y: ArrayInput,
                     x: Optional[ArrayInput] = None) -> ObservedDataset:
    """
    Check raw arrays against the one-sided noncompliance data rules and build the dataset.

    Parameters:
    - z, d, y (array-like): Assignment, receipt and outcome per unit.
    - x (array-like, optional): Covariate per unit.

    Returns:
    - ObservedDataset with read-only arrays.

    Raises:
    - ValidationError listing every violation found (length mismatch, non-binary z or d,
      one-sided violation, non-finite y or x). Arms are not required to be non-empty
      here, see ObservedDataset.require_both_arms.
    """
    try:
        arrays = {name: np.asarray(values, dtype=float).reshape(-1)
                  for name, values in (("z", z), ("d", d), ("y", y), ("x", x)) if values is not None}
    except (TypeError, ValueError) as err:
        raise ValidationError([f"non-numeric: {err}"], context="dataset")

    lengths = {name: values.size for name, values in arrays.items()}
    if len(set(lengths.values())) != 1:
        shown = ", ".join(f"{k}={v}" for k, v in lengths.items())
        raise ValidationError([f"length-mismatch: {shown}"], context="dataset")
    if lengths["z"] == 0:
        raise ValidationError(["empty: no units"], context="dataset")

    violations = []
    violations += _binary_violations("z", arrays["z"])
    violations += _binary_violations("d", arrays["d"])
    one_sided = (arrays["d"] == 1) & (arrays["z"] == 0)
    if np.any(one_sided):
        violations.append(f"one-sided-violation: d=1 with z=0 at units {_units(one_sided)}")
    for name in ("y", "x"):
        if name in arrays and not np.all(np.isfinite(arrays[name])):
            violations.append(f"non-finite-{name}: at units {_units(~np.isfinite(arrays[name]))}")
    if violations:
        raise ValidationError(violations, context="dataset")

    return ObservedDataset(
        z=_frozen(arrays["z"].astype(np.int8)),
        d=_frozen(arrays["d"].astype(np.int8)),
        y=_frozen(arrays["y"]),
        x=_frozen(arrays["x"]) if "x" in arrays else None,
    )


@dataclass(frozen=True, eq=False)
class ComplianceVector:
    """
    Complier (1) / never-taker (0) label per unit. Treated units carry their observed
    receipt; control units carry whatever was imputed or known.
    """
    c: np.ndarray

    @classmethod
    def from_dataset(cls, data: ObservedDataset,
                     control_labels: Optional[ArrayInput] = None) -> ComplianceVector:
        """
        Labels equal to d on treated units, `control_labels` (ordered as the control
        units appear) or zero on control units.
        """
        c = np.array(data.d, dtype=np.int8)
        if control_labels is not None:
            c[data.control] = np.asarray(control_labels, dtype=np.int8)
        return cls.checked(c, data)

    @classmethod
    def checked(cls, c: ArrayInput, data: ObservedDataset) -> ComplianceVector:
        c = np.asarray(c)
        violations = []
        if c.size != data.n:
            violations.append(f"length-mismatch: c has {c.size} labels for {data.n} units")
        else:
            violations += _binary_violations("c", c)
            revealed = data.treated & (c != data.d)
            if np.any(revealed):
                violations.append(f"treated-label: c != d on treated units {_units(revealed)}")
        if violations:
            raise ValidationError(violations, context="ComplianceVector")
        return cls(_frozen(c.astype(np.int8)))

    @property
    def n_compliers(self) -> int:
        return int(self.c.sum())

    def __len__(self):
        return int(self.c.size)

    def __repr__(self):
        return f"ComplianceVector(n={self.c.size}, compliers={self.n_compliers})"


@dataclass(frozen=True, eq=False)
class TruthRecord:
    """
    What the data generating process knows and the analyst does not.

    Attributes:
        c_true (ComplianceVector): True compliance labels of every unit.
        y0 (np.ndarray): Control potential outcomes.
        y1 (np.ndarray): Treated potential outcomes; equal to y0 for never-takers.
    """
    c_true: ComplianceVector
    y0: np.ndarray
    y1: np.ndarray
