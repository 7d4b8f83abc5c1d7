"""Exception hierarchy shared by all modules."""


class SardQuadError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SardQuadError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class RegimeError(SardQuadError, ValueError):
    """A frequency was routed to a branch that does not cover it."""


class ConfigurationError(SardQuadError, ValueError):
    """Invalid tuning parameter (window size, resonance tolerance, ...)."""


class ContractError(SardQuadError, ValueError):
    """Inputs violate a precondition such as matching shapes."""


class NumericError(SardQuadError, ArithmeticError):
    """Overflow or a non-finite intermediate value."""


class SolverError(SardQuadError, ArithmeticError):
    """The dense system is singular to working tolerance."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class EvaluationError(SardQuadError, ValueError):
    """An integrand produced a non-finite sample."""


class NearResonanceWarning(UserWarning):
    """omega*h is close to, but not within eps_res of, an integer."""
