"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ConfigError(ValueError):
    """A configuration object is internally inconsistent or infeasible."""


class BudgetError(RuntimeError):
    """An exact computation would exceed its enumeration guard."""


class EmptyDesignError(RuntimeError):
    """A random design realized zero terms; the estimator is undefined."""


class StateError(RuntimeError):
    """A required ingredient (e.g. retained kernel evaluations) is missing."""


class DegenerateVarianceError(RuntimeError):
    """A variance estimate is zero where a positive value is required."""


class ParseError(ValueError):
    """Malformed tabular input.

    ``row`` and ``col`` are 1-based positions of the offending cell when
    known, else None.
    """

    def __init__(self, message, row=None, col=None):
        if row is not None:
            loc = f" at row {row}" + (f" col {col}" if col is not None else "")
            message = message + loc
        super().__init__(message)
        self.row = row
        self.col = col


class EmptyFileError(ParseError):
    """The input table contains no data rows."""
