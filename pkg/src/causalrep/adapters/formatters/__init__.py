"""Output formatters."""

from .base_formatter import OutputFormatter
from .console_formatter import ConsoleFormatter
from .csv_formatter import CSVFormatter
from .json_formatter import JSONFormatter
from .formatter_factory import FormatterFactory

__all__ = [
    "OutputFormatter",
    "ConsoleFormatter",
    "CSVFormatter",
    "JSONFormatter",
    "FormatterFactory",
]
