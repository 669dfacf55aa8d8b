"""Exception and warning types shared across the package."""


class HelixSteinerError(Exception):
    pass


class InfeasibleConfiguration(HelixSteinerError, ValueError):
    """The requested Steiner geometry does not exist for these parameters."""


class UndefinedSRF(HelixSteinerError, ValueError):
    """The ratio numerator needs A_1 > 0."""


class SearchCapExceeded(HelixSteinerError, RuntimeError):
    """The skip search hit its hard cap before the termination bound."""


class EmptyDomainError(HelixSteinerError, ValueError):
    pass


class ConvergenceError(HelixSteinerError, RuntimeError):
    """An iterative routine stopped without meeting its tolerance.

    ``result`` carries whatever the routine had when it gave up so callers
    can still report it.
    """

    def __init__(self, message, *, iterations=None, residual=None, result=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
        self.result = result


class RadiusWarning(UserWarning):
    """Steiner helix radius exceeds the terminal radius."""


class WindowWarning(UserWarning):
    """Evaluation outside the Graham-Hwang omega window."""
