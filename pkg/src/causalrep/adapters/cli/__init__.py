"""CLI adapter for causalrep."""
