"""Exception types shared across the package."""


class CusumLpError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CusumLpError):
    """Input data violates a basic invariant (too short, non-finite, ...)."""


class WeightAdmissibilityError(CusumLpError):
    """Weight function violates the integrability condition for the chosen p."""


class DivergentLimitError(CusumLpError):
    """Parameter combination for which the limit distribution does not exist."""


class InvalidTrimError(CusumLpError):
    """Trimming interval is empty or outside the support of the CUSUM path."""


class InvalidParameterError(CusumLpError):
    """A scalar parameter is out of its admissible range."""


class InsufficientDataError(CusumLpError):
    """Not enough observations for the requested operation."""


class QuadratureAccuracyError(CusumLpError):
    """Numerical quadrature failed to reach the requested accuracy."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class InvalidModelError(CusumLpError):
    """Noise model parameters are outside the stationary/valid region."""


class PrecisionError(CusumLpError):
    """Too few Monte Carlo replications for the requested quantile."""
