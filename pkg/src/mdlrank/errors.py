"""Exception taxonomy shared across the toolkit.

The CLI maps these onto its exit statuses: parse/degenerate errors are data
errors (exit 3), domain/convergence errors are numerical errors (exit 4).
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class DegenerateInputError(ValueError):
    """Input is structurally valid but carries no usable signal."""


class ParseError(ValueError):
    """A file could not be parsed; carries 1-based coordinates when known."""

    def __init__(self, message, row=None, col=None):
        if row is not None and col is not None:
            message = f"{message} (row {row}, column {col})"
        elif row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)
        self.row = row
        self.col = col


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration cap."""
