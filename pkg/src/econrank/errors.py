"""Exception hierarchy shared by all econrank modules.

The CLI maps these onto exit codes: usage errors (bad arguments,
unresolvable selections) exit 2, data errors (unreadable or invalid
input) exit 3, numerical failures (non-convergence, consistency
violations) exit 4.
"""


class EconrankError(Exception):
    """Base class for all econrank errors."""


class RangeError(EconrankError, ValueError):
    """An argument is outside its documented range."""


class UsageError(EconrankError, ValueError):
    """A request cannot be carried out as asked (bad selection, bad format name)."""


class ValidationError(EconrankError, ValueError):
    """Input data violates a structural invariant."""


class IngestionError(ValidationError):
    """A flow table could not be parsed; carries the offending row number."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class DegenerateInputError(ValidationError):
    """Input is structurally valid but carries no usable signal (e.g. zero total flow)."""


class ConvergenceError(EconrankError, RuntimeError):
    """An iterative computation did not reach its tolerance; carries the last residual."""

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (last residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class SpectralError(EconrankError, RuntimeError):
    """A computed eigenvalue landed outside its provable range."""


class InternalConsistencyError(EconrankError, RuntimeError):
    """A result violated an identity that holds by construction; indicates a bug."""
