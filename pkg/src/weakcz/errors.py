"""Shared exception types."""


class InfeasibleError(ValueError):
    """Requested parameters admit no solution of the gate conditions."""


class OracleMismatchError(AssertionError):
    """Cross-check between independent computation routes failed."""
