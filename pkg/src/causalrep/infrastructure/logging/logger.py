"""
causalrep logging infrastructure.

Provides centralized logging with:
- Human-readable console output on stderr
- JSON-lines file output (optionally rotated daily)
- Thread-local context fields (replication, step, method) merged into records
- Singleton access so domain services and handlers share one configuration
"""

import json
import logging
import logging.handlers
import sys
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from .context import LogContext

_RESERVED = frozenset(
    logging.LogRecord("", 0, "", 0, "", (), None).__dict__.keys()
) | {"message", "asctime"}


class JSONFormatter(logging.Formatter):
    """Format log records as one JSON object per line, extra fields included."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        for key, value in record.__dict__.items():
            if key not in _RESERVED:
                log_data[key] = value

        if record.exc_info:
            log_data["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }

        return json.dumps(log_data, default=str)


class HumanReadableFormatter(logging.Formatter):
    """
    Console formatter.

    Format: YYYY-MM-DD HH:MM:SS - LEVEL - message [key=value ...]
    """

    def __init__(self):
        super().__init__(
            fmt="%(asctime)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        fields = {
            k: v for k, v in record.__dict__.items() if k not in _RESERVED
        }
        if not fields:
            return base
        return base + " " + " ".join(f"{k}={v}" for k, v in fields.items())


class CausalRepLogger:
    """
    Centralized logger for causalrep.

    Example:
        >>> logger = CausalRepLogger.get_instance(level="INFO")
        >>> logger.info("Replication finished", extra={"replication": 3})
    """

    _instance: Optional["CausalRepLogger"] = None
    _lock: threading.Lock = threading.Lock()

    def __init__(
        self,
        level: str = "INFO",
        log_file: Optional[Path] = None,
        console: bool = True,
        rotation: str = "daily",
        retention_days: int = 30,
    ):
        """
        Args:
            level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_file: Optional path of the JSON-lines log file
            console: Enable console output
            rotation: "daily" or "none"
            retention_days: Rotated files to keep
        """
        self.logger = logging.getLogger("causalrep")
        self.logger.setLevel(getattr(logging, level.upper()))
        self.logger.propagate = False
        self.logger.handlers.clear()

        if console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(getattr(logging, level.upper()))
            console_handler.setFormatter(HumanReadableFormatter())
            self.logger.addHandler(console_handler)

        if log_file:
            log_file = Path(log_file)
            log_file.parent.mkdir(parents=True, exist_ok=True)
            if rotation == "daily":
                file_handler = logging.handlers.TimedRotatingFileHandler(
                    filename=str(log_file),
                    when="midnight",
                    interval=1,
                    backupCount=retention_days,
                    encoding="utf-8",
                )
            else:
                file_handler = logging.FileHandler(str(log_file), encoding="utf-8")
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(JSONFormatter())
            self.logger.addHandler(file_handler)

    @classmethod
    def get_instance(cls, **kwargs) -> "CausalRepLogger":
        """
        Return the shared logger, creating it with ``kwargs`` on first use.

        Later calls ignore ``kwargs``; use ``configure`` to replace the setup.
        """
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = cls(**kwargs)
        return cls._instance

    @classmethod
    def configure(cls, **kwargs) -> "CausalRepLogger":
        """Replace the shared logger (used once by the CLI after loading config)."""
        with cls._lock:
            cls._instance = cls(**kwargs)
        return cls._instance

    def _merge_context(self, kwargs: Dict[str, Any]) -> Dict[str, Any]:
        """Merge LogContext into kwargs['extra']; explicit extra fields win."""
        context = LogContext.get_context()
        if context:
            kwargs = kwargs.copy()
            kwargs["extra"] = {**context, **kwargs.get("extra", {})}
        return kwargs

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, **self._merge_context(kwargs))

    def info(self, message: str, **kwargs):
        self.logger.info(message, **self._merge_context(kwargs))

    def warning(self, message: str, **kwargs):
        self.logger.warning(message, **self._merge_context(kwargs))

    def error(self, message: str, **kwargs):
        self.logger.error(message, **self._merge_context(kwargs))

    def critical(self, message: str, **kwargs):
        self.logger.critical(message, **self._merge_context(kwargs))


def get_logger(name: str) -> logging.Logger:
    """Child of the configured ``causalrep`` logger."""
    return logging.getLogger(f"causalrep.{name}")
