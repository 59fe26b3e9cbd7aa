"""Exception types shared across the toolkit."""


class ConfigurationError(ValueError):
    """A configuration value is invalid or internally inconsistent."""


class GenerationError(RuntimeError):
    """Synthetic-conference generation hit an infeasible constraint."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the last residual so callers can report how far off it was.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
