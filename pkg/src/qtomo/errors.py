"""Exception hierarchy.

Validation failures subclass ``ValueError`` and numerical failures subclass
``ArithmeticError`` so callers that only know the builtins still catch them.
The CLI maps the two families to exit codes 2 and 3.
"""


class QtomoError(Exception):
    pass


class ValidationError(QtomoError, ValueError):
    """An input violates a documented invariant."""


class DimensionError(ValidationError):
    pass


class InconsistentSamplesError(ValidationError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NumericalError(QtomoError, ArithmeticError):
    """A well-formed input on which the numerical method cannot deliver."""


class ConvergenceError(NumericalError):
    pass


class OscillationError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    pass


class RankDeficiencyError(NumericalError):
    def __init__(self, message, rank, required):
        super().__init__(message)
        self.rank = rank
        self.required = required
