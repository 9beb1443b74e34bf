"""Exception hierarchy.

DomainError covers invalid inputs and contract violations (CLI exit code 2);
NumericalError covers solver failures and detected instabilities (exit 3).
"""


class EntrodynError(Exception):
    """Base class for package errors."""


class DomainError(EntrodynError, ValueError):
    """Input violates a precondition or type invariant."""


class GridMismatchError(DomainError):
    """Operands live on different grids."""


class NumericalError(EntrodynError, RuntimeError):
    """A numerical procedure failed (non-convergence, instability, ...)."""


class CFLViolationError(NumericalError):
    """Explicit step rejected; carries a suggested stable dt."""

    def __init__(self, message, suggested_dt):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class FloorClampWarning(RuntimeWarning):
    """Emitted when density cells were floored in a derivative estimate."""
