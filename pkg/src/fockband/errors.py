"""Exception hierarchy shared by all modules."""


class FockbandError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FockbandError, ValueError):
    """Input outside the mathematical domain of an operation."""


class EvaluationOverflow(FockbandError, OverflowError):
    """Result not representable in double precision even in the log domain."""


class QuadratureToleranceError(FockbandError, ArithmeticError):
    """Quadrature refinement did not reach the requested tolerance."""

    def __init__(self, message, delta=None):
        super().__init__(message)
        self.delta = delta


class NormConvergenceError(FockbandError, ArithmeticError):
    """Iterative norm estimate failed to converge."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class TruncationError(FockbandError, ArithmeticError):
    """Neglected basis tail is too heavy for the requested evaluation."""

    def __init__(self, message, tail=None):
        super().__init__(message)
        self.tail = tail


class SymbolParseError(FockbandError, ValueError):
    """Malformed symbol document."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
