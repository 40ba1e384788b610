"""Tidy tables and per-(shift, method) summary statistics of an experiment."""

import pandas as pd

from ..models.dataset import ShiftLevel
from ..models.diagnostics import RELATIONS
from ..models.experiment import ExperimentResult, Method

SHIFT_ORDER = [s.value for s in ShiftLevel.ordered()]
METHOD_ORDER = [m.value for m in Method]
SUMMARY_COLUMNS = ["shift", "method", "replications"] + [
    f"{prefix}_{stat}"
    for prefix in ("accuracy", "abs_corRC_givenY")
    for stat in ("mean", "median", "q1", "q3")
]


def results_frame(result: ExperimentResult) -> pd.DataFrame:
    """
    One row per (replication, shift, method) with accuracy and correlations.

    Rows are sorted by replication index, then shift ladder order, then
    method order, independent of the order in which replications finished.
    """
    records = []
    for row in result.rows:
        record = {
            "replication": row.replication,
            "shift": row.shift.value,
            "method": row.method.value,
            "accuracy": row.accuracy,
        }
        record.update(row.ci_report.correlations())
        record["verdict"] = row.ci_report.overall.value
        records.append(record)

    columns = ["replication", "shift", "method", "accuracy", *RELATIONS, "verdict"]
    frame = pd.DataFrame.from_records(records, columns=columns)
    if frame.empty:
        return frame
    frame["shift"] = pd.Categorical(frame["shift"], categories=SHIFT_ORDER, ordered=True)
    frame["method"] = pd.Categorical(frame["method"], categories=METHOD_ORDER, ordered=True)
    frame = frame.sort_values(["replication", "shift", "method"], kind="stable")
    frame["shift"] = frame["shift"].astype(str)
    frame["method"] = frame["method"].astype(str)
    return frame.reset_index(drop=True)


def _quartiles(series: pd.Series, prefix: str) -> dict[str, float]:
    return {
        f"{prefix}_mean": float(series.mean()),
        f"{prefix}_median": float(series.median()),
        f"{prefix}_q1": float(series.quantile(0.25)),
        f"{prefix}_q3": float(series.quantile(0.75)),
    }


def summarize(result: ExperimentResult) -> pd.DataFrame:
    """
    Mean, median and quartiles of accuracy and |cor(R, C | Y)| per (shift, method).
    """
    frame = results_frame(result)
    rows = []
    for shift in SHIFT_ORDER:
        for method in METHOD_ORDER:
            cell = frame[(frame["shift"] == shift) & (frame["method"] == method)]
            if cell.empty:
                continue
            summary = {"shift": shift, "method": method, "replications": int(len(cell))}
            summary.update(_quartiles(cell["accuracy"], "accuracy"))
            summary.update(_quartiles(cell["corRC_givenY"].abs(), "abs_corRC_givenY"))
            rows.append(summary)
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
