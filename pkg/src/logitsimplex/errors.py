"""Exception hierarchy.

Input problems derive from :class:`ValueError`; numerical breakdowns derive
from :class:`ArithmeticError`. The CLI maps the first family to exit code 1
and the second to exit code 2.
"""


class LogitSimplexError(Exception):
    pass


class ValidationError(LogitSimplexError, ValueError):
    pass


class DimensionError(ValidationError):
    pass


class NegativeVarianceError(ValidationError):
    pass


class CovarianceError(ValidationError):
    """Covariance is asymmetric, inconsistent with the diagonal, or not PSD."""


class DomainError(ValidationError):
    pass


class NumericalError(LogitSimplexError, ArithmeticError):
    pass


class MomentOverflowError(NumericalError):
    def __init__(self, message, class_index=None):
        super().__init__(message)
        self.class_index = class_index


class DegenerateInputError(NumericalError):
    pass


class MatchingError(NumericalError):
    """Moment matching produced a non-positive factor for some class."""

    def __init__(self, message, class_index=None):
        super().__init__(message)
        self.class_index = class_index
