from typing import Union
import numpy as np
from ..dataobj import ComplianceVector, StatKind
from ..error import DegenerateDenominatorError, NoCompliersInArmError

Labels = Union[ComplianceVector, np.ndarray]

# relative and absolute slack under which a replicate counts as tied with the observed value
TIE_RTOL = 1e-9
TIE_ATOL = 1e-12


def _labels(c: Labels) -> np.ndarray:
    return np.asarray(c.c if isinstance(c, ComplianceVector) else c, dtype=float)

def _arms(z: np.ndarray):
    z = np.asarray(z, dtype=float)
    n_t = z.sum()
    if not 0 < n_t < z.size:
        raise ValueError(f"both arms need at least one unit, got n={z.size}, n_t={int(n_t)}")
    return z, n_t, z.size - n_t


def replicate_values(kind: StatKind, y: np.ndarray, c: Labels, assignments: np.ndarray) -> np.ndarray:
    """
    Test quantity of every row of an assignment matrix, with compliance labels held fixed.

    Parameters:
    - kind (StatKind): IV ratio with D = C Z, complier difference in means, or ITT difference.
    - y (np.ndarray): Outcomes, unchanged across assignments under the sharp null.
    - c (ComplianceVector or array): Labels of every unit.
    - assignments (np.ndarray): (m, n) matrix, or a single (n,) vector, of 0/1 assignments.

    Returns:
    - np.ndarray of m values, NaN where the quantity is undefined (no compliers in the
      treated arm for IV, no compliers in an arm for the discrepancy).
    """
    kind = StatKind(kind)
    y = np.asarray(y, dtype=float)
    Z = np.atleast_2d(np.asarray(assignments, dtype=float))
    n_t = Z.sum(axis=1)
    n_c = Z.shape[1] - n_t
    sum_y1 = Z @ y
    mean_diff = sum_y1 / n_t - (y.sum() - sum_y1) / n_c

    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is StatKind.ITT:
            values = mean_diff
        elif kind is StatKind.IV:
            # D = C Z, so the control arm receipt mean is always zero
            share = Z @ _labels(c) / n_t
            values = np.where(share > 0, mean_diff / share, np.nan)
        elif kind is StatKind.DISCREPANCY:
            c = _labels(c)
            yc = y * c
            compliers_1 = Z @ c
            compliers_0 = c.sum() - compliers_1
            sum_1 = Z @ yc
            sum_0 = yc.sum() - sum_1
            values = np.where((compliers_1 > 0) & (compliers_0 > 0),
                              sum_1 / compliers_1 - sum_0 / compliers_0, np.nan)
        else:
            raise ValueError(f"{kind} is not a randomization test quantity")
    return values


def iv_statistic(y: np.ndarray, d: np.ndarray, z: np.ndarray) -> float:
    """
    IV estimator of the complier average causal effect,
    (mean y_1 - mean y_0) / (mean d_1 - mean d_0) with arm means taken by assignment.
    """
    z, n_t, n_c = _arms(z)
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    denominator = d @ z / n_t - d @ (1 - z) / n_c
    if denominator == 0:
        raise DegenerateDenominatorError("receipt rates are equal in both arms")
    return float((y @ z / n_t - y @ (1 - z) / n_c) / denominator)


def discrepancy(y: np.ndarray, c: Labels, z: np.ndarray) -> float:
    """complier difference in means, treated minus control"""
    z, _, _ = _arms(z)
    c = _labels(c)
    y = np.asarray(y, dtype=float)
    treated, control = c * z, c * (1 - z)
    if treated.sum() == 0 or control.sum() == 0:
        raise NoCompliersInArmError(
            f"compliers per arm: treated={int(treated.sum())}, control={int(control.sum())}")
    return float(y @ treated / treated.sum() - y @ control / control.sum())


def itt_statistic(y: np.ndarray, z: np.ndarray) -> float:
    z, n_t, n_c = _arms(z)
    y = np.asarray(y, dtype=float)
    return float(y @ z / n_t - y @ (1 - z) / n_c)


def at_least(replicate: np.ndarray, observed: float) -> np.ndarray:
    """replicate >= observed, ties within floating point slack included"""
    return (replicate >= observed) | np.isclose(replicate, observed, rtol=TIE_RTOL, atol=TIE_ATOL)

def at_most(replicate: np.ndarray, observed: float) -> np.ndarray:
    return (replicate <= observed) | np.isclose(replicate, observed, rtol=TIE_RTOL, atol=TIE_ATOL)
