"""Exception hierarchy shared by all aatkit modules."""


class AatkitError(Exception):
    """Base class for all package errors."""


class FieldMismatch(AatkitError):
    pass


class VariableMismatch(AatkitError):
    pass


class OrderExceeded(AatkitError):
    pass


class OrderTooLow(AatkitError):
    pass


class CurveEquationViolated(AatkitError):
    pass


class UnsupportedOde(AatkitError):
    pass


class BudgetExceeded(AatkitError):
    pass


class ArityMismatch(AatkitError):
    pass


class SingularAlpha(AatkitError):
    pass


class DenominatorNotUnit(AatkitError):
    pass


class DegenerateFiber(AatkitError):
    pass


class AmbiguousSample(AatkitError):
    pass


class OutsideCell(AatkitError):
    pass


class MissingApproximation(AatkitError):
    pass


class EvaluationDivergence(AatkitError):
    pass


class InputError(AatkitError):
    """Malformed user input (CLI / JSON loaders)."""
