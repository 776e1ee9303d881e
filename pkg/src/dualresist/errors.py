"""Exception hierarchy.

``ValidationError`` covers bad input (the CLI maps it to exit code 2);
``NumericalError`` covers failures inside the linear algebra (exit code 1).
"""


class DualResistError(Exception):
    """Base class for all package errors."""


class ValidationError(DualResistError, ValueError):
    pass


class NumericalError(DualResistError, ArithmeticError):
    pass


# -- input validation --------------------------------------------------------

class SelfLoop(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class VertexOutOfRange(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class SameVertex(ValidationError):
    pass


class EdgeNotInGraph(ValidationError):
    pass


class NonPositiveConductance(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


# -- numerical failures ------------------------------------------------------

class ZeroStandardPart(NumericalError, ZeroDivisionError):
    pass


class NotSymmetric(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularStandardPart(NumericalError):
    pass


class MPDoesNotExist(NumericalError):
    pass


class NotAOneInverse(NumericalError):
    pass


class RoundingGuardFailed(NumericalError):
    pass
