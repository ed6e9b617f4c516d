"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """No stable result could be certified (no plateau, empty spectrum, ...)."""
