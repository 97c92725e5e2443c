from itertools import combinations, islice
from math import comb
from typing import Tuple, Union
import numpy as np
from .pvalue import fold
from .statistic import Labels, replicate_values, at_least, at_most
from ..dataobj import StatKind, Alternative
from ..error import CombinatorialBoundError, DegenerateDenominatorError, NoCompliersInArmError

MAX_ASSIGNMENTS = 10 ** 6
_CHUNK = 65536


def _assignment_blocks(n: int, n_t: int):
    patterns = combinations(range(n), n_t)
    while True:
        chunk = list(islice(patterns, _CHUNK))
        if not chunk:
            return
        block = np.zeros((len(chunk), n), dtype=np.int8)
        rows = np.repeat(np.arange(len(chunk)), n_t)
        block[rows, np.asarray(chunk).reshape(-1)] = 1
        yield block


def enumerate_frt_distribution(y: np.ndarray, c: Labels, z: np.ndarray,
                               kind: Union[StatKind, str]) -> Tuple[float, np.ndarray]:
    """
    Observed value and the full randomization distribution of a test quantity,
    over every assignment with the observed number of treated units.

    Returns:
    - (observed, values): values holds one entry per assignment, NaN where undefined.

    Raises:
    - CombinatorialBoundError: More than MAX_ASSIGNMENTS assignments.
    - DegenerateStatisticError: The observed quantity is undefined.
    """
    kind = StatKind(kind)
    z = np.asarray(z)
    n, n_t = z.size, int(z.sum())
    total = comb(n, n_t)
    if total > MAX_ASSIGNMENTS:
        raise CombinatorialBoundError(f"C({n}, {n_t}) = {total} assignments exceeds {MAX_ASSIGNMENTS}")
    observed = float(replicate_values(kind, y, c, z)[0])
    if np.isnan(observed):
        error = DegenerateDenominatorError if kind is StatKind.IV else NoCompliersInArmError
        raise error(f"observed {kind.value} is undefined for the given labels")
    values = np.concatenate([replicate_values(kind, y, c, block)
                             for block in _assignment_blocks(n, n_t)])
    return observed, values


def enumerate_frt_pvalue(y: np.ndarray, c: Labels, z: np.ndarray, kind: Union[StatKind, str],
                         alternative: Union[Alternative, str] = Alternative.GREATER) -> float:
    """exact randomization p-value with known labels; undefined assignments are left out"""
    observed, values = enumerate_frt_distribution(y, c, z, kind)
    values = values[~np.isnan(values)]
    return fold(int(np.sum(at_least(values, observed))), int(np.sum(at_most(values, observed))),
                values.size, alternative)
