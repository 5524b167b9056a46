"""
Exceptions raised within ``eigenbounds``
"""


class EigenboundsError(Exception):
    """
    Base class for all errors raised on purpose by ``eigenbounds``
    """


class ValidationError(EigenboundsError, ValueError):
    """
    Exception raised if a parameter, domain specification or configuration is invalid
    """


class BesselRangeError(ValidationError):
    """
    Exception raised if a Bessel order, argument or zero index is outside the
    supported range
    """


class DomainError(ValidationError):
    """
    Exception raised if a point lies outside the domain of a function
    """


class CoefficientError(ValidationError):
    """
    Exception raised if the coefficients of a weighted problem violate their bounds
    """


class ConfigError(ValidationError):
    """
    Exception raised if a run or domain configuration cannot be parsed
    """


class InsufficientEigenvaluesError(ValidationError):
    """
    Exception raised if a spectrum holds too few eigenvalues for a check
    """


class UnsupportedDomainError(EigenboundsError, ValueError):
    """
    Exception raised if an operation is not available for the given domain
    """


class GridError(EigenboundsError, ValueError):
    """
    Exception raised if a grid cannot be built (too coarse or empty interior)
    """


class NumericalError(EigenboundsError, ArithmeticError):
    """
    Base class for numerical failures

    Parameters
    ----------
    message : str
        Human readable description

    **diagnostics
        Extra information about the failure (brackets, residuals, iterations), kept
        in :attr:`diagnostics` so that it can be written out as a record
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConvergenceError(NumericalError):
    """
    Exception raised if an iteration does not converge
    """


class FactorizationError(NumericalError):
    """
    Exception raised if a shifted operator cannot be factorised
    """


class DegenerateSpectrumError(NumericalError):
    """
    Exception raised if a spectrum is degenerate where a check needs separation
    """
