"""Console formatter rendering rich tables."""

import io

import pandas as pd
from rich.console import Console
from rich.table import Table

from ...domain.models.diagnostics import RELATIONS, CIReport, RelationVerdict
from ...domain.models.experiment import AcceptanceCheck
from .base_formatter import OutputFormatter, ReportKey

_VERDICT_STYLE = {
    RelationVerdict.PASS: "green",
    RelationVerdict.FAIL: "red",
    RelationVerdict.NOT_EVALUATED: "yellow",
}


class ConsoleFormatter(OutputFormatter):
    """Human-readable tables for the terminal."""

    def __init__(self, use_color: bool = True, verbose: bool = False, width: int = 140):
        self.use_color = use_color
        self.verbose = verbose
        self.width = width

    def _render(self, table: Table) -> str:
        buffer = io.StringIO()
        console = Console(
            file=buffer,
            force_terminal=self.use_color,
            no_color=not self.use_color,
            width=self.width,
        )
        console.print(table)
        return buffer.getvalue()

    def format_summary(self, summary: pd.DataFrame) -> str:
        table = Table(title="Accuracy and |cor(R, C | Y)| by shift and method")
        table.add_column("shift")
        table.add_column("method")
        table.add_column("n", justify="right")
        table.add_column("acc median", justify="right")
        table.add_column("acc IQR", justify="right")
        table.add_column("|cor(R,C|Y)| median", justify="right")
        if self.verbose:
            table.add_column("acc mean", justify="right")
            table.add_column("|cor(R,C|Y)| mean", justify="right")

        for row in summary.itertuples(index=False):
            cells = [
                row.shift,
                row.method,
                str(row.replications),
                f"{row.accuracy_median:.4f}",
                f"{row.accuracy_q1:.4f}-{row.accuracy_q3:.4f}",
                f"{row.abs_corRC_givenY_median:.4f}",
            ]
            if self.verbose:
                cells += [f"{row.accuracy_mean:.4f}", f"{row.abs_corRC_givenY_mean:.4f}"]
            table.add_row(*cells)
        return self._render(table)

    def format_ci_reports(self, reports: list[tuple[ReportKey, CIReport]]) -> str:
        table = Table(title="Conditional-independence diagnostics")
        for name in ("rep", "shift", "method", *RELATIONS, "verdict"):
            table.add_column(name, justify="right" if name.startswith("cor") else "left")

        for (replication, shift, method), report in reports:
            cells = [str(replication), shift, method]
            for relation in RELATIONS:
                style = _VERDICT_STYLE[report.verdicts[relation]]
                cells.append(f"[{style}]{report.correlation(relation):+.3f}[/{style}]")
            overall = report.overall
            cells.append(f"[{_VERDICT_STYLE[overall]}]{overall.value}[/{_VERDICT_STYLE[overall]}]")
            table.add_row(*cells)
        return self._render(table)

    def format_acceptance(self, checks: list[AcceptanceCheck]) -> str:
        table = Table(title="Acceptance checks")
        table.add_column("check")
        table.add_column("result")
        table.add_column("detail")
        for check in checks:
            result = "[green]pass[/green]" if check.passed else "[red]fail[/red]"
            table.add_row(check.name, result, check.detail)
        return self._render(table)
