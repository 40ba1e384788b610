"""Configuration management."""

from .config_loader import ConfigLoader
from .config_models import CausalRepConfig

__all__ = ["ConfigLoader", "CausalRepConfig"]
