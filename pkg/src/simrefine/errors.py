"""Exception hierarchy shared across the package."""


class SimRefineError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SimRefineError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class ValidationError(SimRefineError):
    """An input or configuration invariant is violated."""


class DegenerateInputError(SimRefineError):
    """Numerically degenerate input (zero variance, zero-norm rows, ...)."""


class NumericalError(SimRefineError):
    """A numerical routine failed to converge or produce a usable result."""
