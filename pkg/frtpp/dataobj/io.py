import os
from typing import Iterable, Union
import pandas as pd
from .dataset import ObservedDataset, TruthRecord, ComplianceVector, validate_dataset
from .items import RejectionSummary
from ..error import InvalidFormatError
from ..helper import ensure_parent

PathLike = Union[str, os.PathLike]

DATASET_COLUMNS = ("z", "d", "y")
TRUTH_COLUMNS = ("c_true", "y0", "y1")


def _read_table(path: PathLike, required: Iterable[str], optional: Iterable[str] = ()) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip", encoding="utf-8")
    except (pd.errors.EmptyDataError, pd.errors.ParserError, UnicodeDecodeError) as err:
        raise InvalidFormatError([f"unreadable-csv: {err}"], context=str(path))
    required, optional = list(required), list(optional)
    columns = list(frame.columns)
    missing = [c for c in required if c not in columns]
    unknown = [c for c in columns if c not in required + optional]
    problems = []
    if missing:
        problems.append(f"missing-columns: {missing}")
    if unknown:
        problems.append(f"unknown-columns: {unknown}")
    if problems:
        raise InvalidFormatError(problems, context=str(path))
    return frame

def _write_table(frame: pd.DataFrame, path: PathLike):
    frame.to_csv(ensure_parent(path), index=False, lineterminator="\n", encoding="utf-8")


def read_dataset(path: PathLike) -> ObservedDataset:
    """parse a `z,d,y[,x]` CSV and validate it"""
    frame = _read_table(path, DATASET_COLUMNS, optional=("x",))
    x = frame["x"].to_numpy(dtype=float) if "x" in frame.columns else None
    return validate_dataset(frame["z"].to_numpy(dtype=float),
                            frame["d"].to_numpy(dtype=float),
                            frame["y"].to_numpy(dtype=float),
                            x)

def write_dataset(data: ObservedDataset, path: PathLike):
    columns = {"z": data.z, "d": data.d, "y": data.y}
    if data.has_covariate:
        columns["x"] = data.x
    _write_table(pd.DataFrame(columns), path)


def read_truth(path: PathLike, data: ObservedDataset) -> TruthRecord:
    frame = _read_table(path, TRUTH_COLUMNS)
    if len(frame) != data.n:
        raise InvalidFormatError([f"length-mismatch: {len(frame)} truth rows for {data.n} units"],
                                 context=str(path))
    c_true = ComplianceVector.checked(frame["c_true"].to_numpy(), data)
    return TruthRecord(c_true, frame["y0"].to_numpy(dtype=float), frame["y1"].to_numpy(dtype=float))

def write_truth(truth: TruthRecord, path: PathLike):
    _write_table(pd.DataFrame({"c_true": truth.c_true.c, "y0": truth.y0, "y1": truth.y1}), path)


RESULT_COLUMNS = ("scenario_id", "predictiveness", "eta_c0", "tau", "misspecified", "method",
                  "kind", "replications", "rejection_rate", "mc_se", "mean_degenerate_draws")
# written after eta_c0 only when some scenario moves the never-taker mean off 0
ETA_N_COLUMN = "eta_n"


def write_results(summaries: Iterable[RejectionSummary], path: PathLike):
    """rejection rate table, fixed float format so identical runs give identical bytes"""
    rows = [s.as_row() for s in summaries]
    columns = list(RESULT_COLUMNS)
    if any(row[ETA_N_COLUMN] != 0 for row in rows):
        columns.insert(columns.index("eta_c0") + 1, ETA_N_COLUMN)
    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(ensure_parent(path), index=False, lineterminator="\n", encoding="utf-8",
                 float_format="%.6f", na_rep="NA")

def read_results(path: PathLike) -> pd.DataFrame:
    """results table; a missing eta_n column means every never-taker mean was 0"""
    frame = _read_table(path, RESULT_COLUMNS, optional=(ETA_N_COLUMN,))
    if ETA_N_COLUMN not in frame.columns:
        frame[ETA_N_COLUMN] = 0.0
    problems = []
    for column in ("eta_c0", ETA_N_COLUMN, "tau", "rejection_rate", "mc_se", "replications", "misspecified"):
        if len(frame) and not pd.api.types.is_numeric_dtype(frame[column]):
            problems.append(f"non-numeric-column: {column}")
    if problems:
        raise InvalidFormatError(problems, context=str(path))
    frame["method"] = frame["method"].astype(str)
    frame["kind"] = frame["kind"].astype(str)
    return frame
