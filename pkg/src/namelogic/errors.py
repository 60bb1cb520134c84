"""Exception types shared across the package."""


class LogicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LogicError):
    """Formula text could not be parsed; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ModelFormatError(LogicError):
    """A model dictionary or JSON document is structurally malformed."""


class UndeclaredSymbolError(LogicError):
    """A state, agent, name, or proposition is not declared by the model."""


class UnsupportedFragmentError(LogicError):
    """The formula uses an operator outside the fragment an operation supports."""


class BudgetExceededError(LogicError):
    """An enumeration would exceed its configured budget."""


class NotReflexiveError(LogicError):
    """A neighborhood model is not reflexive where reflexivity is required."""
