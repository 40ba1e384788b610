"""Factory for creating output formatters."""

from .base_formatter import OutputFormatter
from .console_formatter import ConsoleFormatter
from .csv_formatter import CSVFormatter
from .json_formatter import JSONFormatter


class FormatterFactory:
    """Creates formatters by name."""

    @staticmethod
    def create(format_name: str, verbose: bool = False) -> OutputFormatter:
        """
        Create formatter by name.

        Raises:
            ValueError: If format_name is not recognized
        """
        format_name = format_name.lower()

        if format_name == "console":
            return ConsoleFormatter(verbose=verbose)
        elif format_name == "json":
            return JSONFormatter()
        elif format_name == "csv":
            return CSVFormatter()
        else:
            raise ValueError(
                f"Unknown format: {format_name}. "
                f"Supported formats: {', '.join(FormatterFactory.get_supported_formats())}"
            )

    @staticmethod
    def get_supported_formats() -> list[str]:
        return ["console", "json", "csv"]
