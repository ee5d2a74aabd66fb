"""Exception hierarchy shared by all modules."""


class QotError(Exception):
    """Base class for library errors."""


class ValidationError(QotError, ValueError):
    """Malformed input: wrong shape, non-Hermitian, bad Kraus set, ..."""


class DomainError(QotError, ValueError):
    """Input outside the mathematical domain of the operation."""


class SizeError(QotError, ValueError):
    """Problem too large for dense or exhaustive treatment."""


class PreconditionError(QotError):
    """A bound's hypothesis does not hold, so the bound is not applicable."""


class ConvergenceError(QotError, RuntimeError):
    """A numerical procedure failed its own accuracy contract."""
