"""CSV formatter for tidy tabular output."""

import pandas as pd

from ...domain.models.diagnostics import CIReport
from ...domain.models.experiment import AcceptanceCheck
from ...infrastructure.persistence.results_store import ci_report_record
from .base_formatter import OutputFormatter, ReportKey


class CSVFormatter(OutputFormatter):
    """Comma-separated tables, the same columns the result files use."""

    def format_summary(self, summary: pd.DataFrame) -> str:
        return summary.to_csv(index=False, float_format="%.17g", lineterminator="\n")

    def format_ci_reports(self, reports: list[tuple[ReportKey, CIReport]]) -> str:
        frame = pd.DataFrame.from_records([
            {"replication": rep, "shift": shift, "method": method, **ci_report_record(report)}
            for (rep, shift, method), report in reports
        ])
        return frame.to_csv(index=False, lineterminator="\n")

    def format_acceptance(self, checks: list[AcceptanceCheck]) -> str:
        frame = pd.DataFrame(
            [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
            columns=["check", "passed", "detail"],
        )
        return frame.to_csv(index=False, lineterminator="\n")
