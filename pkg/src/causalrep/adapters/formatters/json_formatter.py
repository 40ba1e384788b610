"""JSON formatter for machine-readable output."""

import json
from typing import Any

import pandas as pd

from ...domain.models.diagnostics import CIReport
from ...domain.models.experiment import AcceptanceCheck
from .base_formatter import OutputFormatter, ReportKey


class JSONFormatter(OutputFormatter):
    """Summaries, CI reports and acceptance checks as JSON."""

    def __init__(self, pretty: bool = True):
        self.pretty = pretty

    def _dump(self, data: Any) -> str:
        return json.dumps(data, indent=2 if self.pretty else None, default=str)

    def format_summary(self, summary: pd.DataFrame) -> str:
        return self._dump(summary.to_dict(orient="records"))

    def format_ci_reports(self, reports: list[tuple[ReportKey, CIReport]]) -> str:
        return self._dump([
            {
                "replication": replication,
                "shift": shift,
                "method": method,
                "correlations": report.correlations(),
                "verdicts": {k: v.value for k, v in report.verdicts.items()},
                "overall": report.overall.value,
            }
            for (replication, shift, method), report in reports
        ])

    def format_acceptance(self, checks: list[AcceptanceCheck]) -> str:
        return self._dump({
            "passed": all(c.passed for c in checks),
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks
            ],
        })
