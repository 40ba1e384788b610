"""
Thread-local logging context.

Fields set here (replication index, pipeline step, method, shift level) are
merged into every record emitted through CausalRepLogger on the same thread.
Replications running on worker threads therefore keep their own fields.

Example:
    >>> with logging_context(replication=2, step="train"):
    ...     logger.info("Epoch finished")  # record carries replication and step
"""

import threading
from contextlib import contextmanager
from typing import Any, Dict

_MISSING = object()


class LogContext:
    """Per-thread dictionary of fields attached to log records."""

    _local = threading.local()

    @classmethod
    def _fields(cls) -> Dict[str, Any]:
        if not hasattr(cls._local, "context"):
            cls._local.context = {}
        return cls._local.context

    @classmethod
    def get_context(cls) -> Dict[str, Any]:
        """Copy of the current thread's fields."""
        return dict(cls._fields())

    @classmethod
    def set(cls, key: str, value: Any) -> None:
        cls._fields()[key] = value

    @classmethod
    def update(cls, fields: Dict[str, Any]) -> None:
        cls._fields().update(fields)

    @classmethod
    def get(cls, key: str, default: Any = None) -> Any:
        return cls._fields().get(key, default)

    @classmethod
    def clear(cls) -> None:
        cls._local.context = {}

    @classmethod
    def remove(cls, *keys: str) -> None:
        fields = cls._fields()
        for key in keys:
            fields.pop(key, None)


@contextmanager
def logging_context(**fields):
    """
    Set fields for the duration of the block.

    On exit each field returns to the value it had before entering, so an
    inner ``logging_context(step="adjust")`` inside an outer
    ``logging_context(step="train")`` restores ``step="train"``.
    """
    previous = {key: LogContext.get(key, _MISSING) for key in fields}
    LogContext.update(fields)
    try:
        yield
    finally:
        for key, value in previous.items():
            if value is _MISSING:
                LogContext.remove(key)
            else:
                LogContext.set(key, value)
