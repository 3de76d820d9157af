"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class CubicJacError(Exception):
    exit_code = 1


class StructuralError(CubicJacError, ValueError):
    """Mismatched variable counts, fields or dimensions."""

    exit_code = 2


class ParseError(CubicJacError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        super().__init__(where + message)


class HypothesisViolation(CubicJacError):
    """An input violates a precondition (characteristic, rank, nilpotency, open case)."""

    exit_code = 3


class TheoremViolation(CubicJacError):
    """A verified construction failed on an input that satisfies every hypothesis."""

    exit_code = 4


class ResourceLimitError(CubicJacError):
    exit_code = 5


class FieldTooSmall(ResourceLimitError):
    pass


class NonPolynomialInverse(ResourceLimitError):
    pass
