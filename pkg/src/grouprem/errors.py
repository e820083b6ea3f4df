"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes, so every failure a user can trigger
should surface as one of them rather than a bare ValueError.
"""


class GroupRemError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(GroupRemError, ValueError):
    pass


class SizeLimitError(GroupRemError):
    pass


class ContractViolation(GroupRemError):
    pass


class ConfigError(GroupRemError, ValueError):
    pass


class SystemSyntaxError(GroupRemError, ValueError):
    """Malformed equation-system text; carries a 1-based line and column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IndependenceError(InvalidParameter):
    """Equation rows are linearly dependent over the rationals."""

    def __init__(self, message, row):
        super().__init__(message)
        self.row = row


class RepresentationNotFound(GroupRemError):
    """No (strong) graph representation exists within the search caps."""
