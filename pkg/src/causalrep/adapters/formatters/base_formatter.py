"""Base formatter interface."""

from abc import ABC, abstractmethod

import pandas as pd

from ...domain.models.diagnostics import CIReport
from ...domain.models.experiment import AcceptanceCheck

# (replication, shift, method) label of one CI report
ReportKey = tuple[int, str, str]


class OutputFormatter(ABC):
    """
    Base class for output formatters.

    Formatters render experiment summaries, CI reports and acceptance checks
    for the console or for machine consumption.
    """

    @abstractmethod
    def format_summary(self, summary: pd.DataFrame) -> str:
        """Render the per-(shift, method) summary table."""
        pass

    @abstractmethod
    def format_ci_reports(self, reports: list[tuple[ReportKey, CIReport]]) -> str:
        """Render CI reports, one per (replication, shift, method)."""
        pass

    @abstractmethod
    def format_acceptance(self, checks: list[AcceptanceCheck]) -> str:
        """Render acceptance check outcomes."""
        pass
