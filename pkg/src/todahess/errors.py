"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Unsupported type/rank or invalid run parameters."""


class DomainError(ValueError):
    """Input violates a documented precondition (membership, radius, ...)."""


class NumericalError(RuntimeError):
    """An internal solve failed to reach its documented residual."""
