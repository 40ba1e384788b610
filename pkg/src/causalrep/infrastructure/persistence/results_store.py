"""
CSV outputs of the shift experiment.

results.csv column order (fixed):

    replication,shift,method,accuracy,corRY,corRC,corCY,corRY_givenC,
    corRC_givenY,corCY_givenR,verdict

Accuracy is written with 4 decimals, correlations with 17 significant
digits. A replication that failed contributes one row with verdict
``skipped`` and empty measurements; its error goes to failures.csv.
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ...domain.models.dataset import ShiftLevel
from ...domain.models.diagnostics import RELATIONS, CIReport
from ...domain.models.experiment import ExperimentResult, Method, PredictionRecord
from ...domain.services.summary import results_frame

PathLike = Union[str, Path]

RESULT_COLUMNS = ["replication", "shift", "method", "accuracy", *RELATIONS, "verdict"]
PREDICTION_COLUMNS = ["replication", "shift", "method", "r_hat", "color", "label"]
CI_COLUMNS = [
    "replication", "shift", "method",
    *(name for r in RELATIONS for name in (r, f"{r}_verdict")),
    "independence_threshold", "dependence_threshold", "overall",
]
SKIPPED = "skipped"


def _g17(value: float) -> str:
    return format(float(value), ".17g")


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def ci_report_record(report: CIReport) -> dict[str, str]:
    """Correlation, verdict and thresholds of one report as CSV cells."""
    record = {}
    for relation in RELATIONS:
        record[relation] = _g17(report.correlation(relation))
        record[f"{relation}_verdict"] = report.verdicts[relation].value
    record["independence_threshold"] = _g17(report.independence_threshold)
    record["dependence_threshold"] = _g17(report.dependence_threshold)
    record["overall"] = report.overall.value
    return record


class ResultsStore:
    """Writes and reads the experiment CSV files in one output directory."""

    def __init__(self, output_directory: PathLike):
        self.output_directory = Path(output_directory)

    def _path(self, name: str) -> Path:
        self.output_directory.mkdir(parents=True, exist_ok=True)
        return self.output_directory / name

    def write_results(self, result: ExperimentResult) -> Path:
        frame = results_frame(result)
        table = pd.DataFrame(
            {
                "replication": frame["replication"].astype(int).astype(str),
                "shift": frame["shift"],
                "method": frame["method"],
                "accuracy": frame["accuracy"].map(lambda v: f"{v:.4f}"),
                **{r: frame[r].map(_g17) for r in RELATIONS},
                "verdict": frame["verdict"],
            },
            columns=RESULT_COLUMNS,
        )
        skipped = pd.DataFrame(
            [
                {"replication": str(f.replication), "verdict": SKIPPED}
                for f in sorted(result.failures, key=lambda f: f.replication)
            ],
            columns=RESULT_COLUMNS,
        )
        if not skipped.empty:
            table = pd.concat([table, skipped], ignore_index=True)
            table["_order"] = table["replication"].astype(int)
            table = table.sort_values("_order", kind="stable").drop(columns="_order")
        return _write(table, self._path("results.csv"))

    def write_ci_reports(self, result: ExperimentResult) -> Path:
        order = {s: i for i, s in enumerate(ShiftLevel.ordered())}
        methods = {m: i for i, m in enumerate(Method)}
        rows = sorted(
            result.rows, key=lambda r: (r.replication, order[r.shift], methods[r.method])
        )
        records = [
            {
                "replication": r.replication,
                "shift": r.shift.value,
                "method": r.method.value,
                **ci_report_record(r.ci_report),
            }
            for r in rows
        ]
        return _write(
            pd.DataFrame.from_records(records, columns=CI_COLUMNS), self._path("ci_reports.csv")
        )

    def write_summary(self, summary: pd.DataFrame) -> Path:
        path = self._path("summary.csv")
        summary.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        return path

    def write_failures(self, result: ExperimentResult) -> Path:
        frame = pd.DataFrame(
            [
                {"replication": f.replication, "step": f.step, "error": f.error}
                for f in sorted(result.failures, key=lambda f: f.replication)
            ],
            columns=["replication", "step", "error"],
        )
        return _write(frame, self._path("failures.csv"))

    def write_predictions(self, predictions: list[PredictionRecord]) -> Path:
        order = {s: i for i, s in enumerate(ShiftLevel.ordered())}
        methods = {m: i for i, m in enumerate(Method)}
        frames = []
        for p in sorted(predictions, key=lambda p: (p.replication, order[p.shift], methods[p.method])):
            n = len(p.r_hat)
            frames.append(pd.DataFrame({
                "replication": np.full(n, p.replication),
                "shift": p.shift.value,
                "method": p.method.value,
                "r_hat": [_g17(v) for v in p.r_hat],
                "color": np.asarray(p.colors, dtype=int),
                "label": np.asarray(p.labels, dtype=int),
            }))
        frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=PREDICTION_COLUMNS)
        return _write(frame, self._path("predictions.csv"))

    def write_experiment(self, result: ExperimentResult) -> dict[str, Path]:
        """Write every output the result carries; returns name -> path."""
        paths = {
            "results": self.write_results(result),
            "ci_reports": self.write_ci_reports(result),
        }
        if result.summary is not None:
            paths["summary"] = self.write_summary(result.summary)
        if result.failures:
            paths["failures"] = self.write_failures(result)
        if result.predictions:
            paths["predictions"] = self.write_predictions(result.predictions)
        return paths


def load_predictions(path: PathLike) -> list[PredictionRecord]:
    """
    Read a predictions CSV.

    ``r_hat``, ``color`` and ``label`` are required. Files without
    replication/shift/method columns are read as a single group
    (replication 0, no-shift, method none).
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = {"r_hat", "color", "label"} - set(frame.columns)
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    if "replication" not in frame:
        frame["replication"] = 0
    if "shift" not in frame:
        frame["shift"] = ShiftLevel.NO_SHIFT.value
    if "method" not in frame:
        frame["method"] = Method.NONE.value

    records = []
    for (replication, shift, method), group in frame.groupby(
        ["replication", "shift", "method"], sort=False
    ):
        records.append(PredictionRecord(
            replication=int(replication),
            shift=ShiftLevel(shift),
            method=Method(method),
            r_hat=group["r_hat"].to_numpy(dtype=float),
            colors=group["color"].to_numpy(dtype=int),
            labels=group["label"].to_numpy(dtype=int),
        ))
    return records
