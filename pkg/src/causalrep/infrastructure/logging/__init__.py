"""Logging infrastructure for causalrep."""

from .logger import CausalRepLogger, get_logger
from .context import LogContext, logging_context

__all__ = ["CausalRepLogger", "get_logger", "LogContext", "logging_context"]
