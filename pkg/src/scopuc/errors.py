"""Exception hierarchy shared by all modules."""


class OpucError(Exception):
    """Base class for every error raised by this package."""


class DegreeMismatch(OpucError, ValueError):
    pass


class ParameterPole(OpucError, ZeroDivisionError):
    pass


class GammaPole(OpucError, ValueError):
    pass


class SingularPoint(OpucError, ValueError):
    pass


class GridOnSingularity(OpucError, ValueError):
    pass


class QuadratureFailure(OpucError, ArithmeticError):
    pass


class MomentRangeExceeded(OpucError, IndexError):
    pass


class NumericalBreakdown(OpucError, ArithmeticError):
    """|alpha_n| reached 1 within tolerance: precision exhausted or invalid weight."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoClosedForm(OpucError, LookupError):
    pass


class OutOfTheoremRange(OpucError, ValueError):
    pass


class UnknownRelation(OpucError, KeyError):
    pass


class OutOfRange(OpucError, ValueError):
    pass


class UnsolvableStep(OpucError, ZeroDivisionError):
    pass


class NotEvaluable(OpucError, ArithmeticError):
    """1 - |alpha_{n-1}|^2 is too small for a difference equation to be evaluated."""


class Infeasible(OpucError, ArithmeticError):
    pass


class DomainError(OpucError, ValueError):
    """Weight parameters outside the family's admissible range."""
