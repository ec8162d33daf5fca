"""Exception types raised across the package."""


class TadpoleError(Exception):
    """Base class for all package errors."""


class DomainError(TadpoleError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NoSolution(TadpoleError):
    """A matching equation has no root for the requested parameters.

    ``condition`` names the violated existence condition, e.g. ``"omega >= lambda_n"``.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class QuantizationViolation(TadpoleError, ValueError):
    """Magnetic flux is not an integer multiple of 2*pi."""


class PhaseUndefined(TadpoleError):
    """The head modulus vanishes, so the phase cannot be unwrapped."""


class NonNormalizable(TadpoleError):
    """A functional was requested for a state that is not square integrable."""
