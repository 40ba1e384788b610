"""Adapters: CLI and output formatters."""
