"""Presentation layer for causalrep."""

from .error_presenter import ErrorPresenter

__all__ = ["ErrorPresenter"]
