"""Exception hierarchy shared by all modules."""


class SerialFactError(Exception):
    """Base class for every error raised by this package."""


class MalformedSpec(SerialFactError):
    pass


class CapExceeded(SerialFactError):
    pass


class BudgetExceeded(SerialFactError):
    pass


class QuotientGeneratorsNotTwoSided(SerialFactError):
    pass


class RingMismatch(SerialFactError):
    pass


class ImproperMember(SerialFactError):
    pass


class NotTwoSided(SerialFactError):
    pass


class ImproperIdeal(SerialFactError):
    pass


class NotUniserial(SerialFactError):
    pass


class NotAnOverideal(SerialFactError):
    pass


class NotFactorizable(SerialFactError):
    pass


class NoInjectionFound(SerialFactError):
    pass


class ProfileViolation(SerialFactError):
    pass


class ZeroInput(SerialFactError):
    pass


class FactorBudgetExceeded(BudgetExceeded):
    pass


class NotFactorable(SerialFactError):
    pass


class NotADivisor(SerialFactError):
    pass


class InvertibleInput(SerialFactError):
    pass


class ParseError(SerialFactError):
    """Ring-spec text could not be parsed; carries 1-based line/column."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
