"""Exception and warning types raised by polykernel."""


class PolykernelError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(PolykernelError, ValueError):
    pass


class DomainError(PolykernelError, ValueError):
    """A point or series argument lies outside the convergence domain."""


class ConditioningError(PolykernelError, ArithmeticError):
    def __init__(self, message, cond_estimate):
        super().__init__(f"{message} (cond ~ {cond_estimate:.3e})")
        self.cond_estimate = cond_estimate


class RankError(PolykernelError, ValueError):
    """Requested degree exceeds what a finitely supported measure can carry."""


class EstimationError(PolykernelError):
    pass


class UnsupportedError(PolykernelError, TypeError):
    pass


class ConfigurationError(PolykernelError, ValueError):
    """A verification was asked to run with a quadrature rule that cannot resolve it."""


class TruncationWarning(UserWarning):
    """A kernel series hit its term cap before the stopping rule fired."""
