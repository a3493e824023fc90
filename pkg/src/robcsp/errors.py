"""Exception types raised across the package."""


class RobCSPError(Exception):
    """Base class for all errors raised by robcsp."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class NotPositiveDefinite(RobCSPError, ArithmeticError):
    code = "NotPositiveDefinite"


class NonFinite(RobCSPError, ValueError):
    code = "NonFinite"


class NoPositiveEigenvalue(RobCSPError, ArithmeticError):
    code = "NoPositiveEigenvalue"


class DegenerateTrial(RobCSPError, ValueError):
    code = "DegenerateTrial"


class InsufficientVariability(RobCSPError, ValueError):
    code = "InsufficientVariability"


class ZeroVector(RobCSPError, ValueError):
    code = "ZeroVector"


class NonpositiveDenominator(RobCSPError, ArithmeticError):
    """The pooled quadratic form is not positive; a tolerance set is too wide."""

    code = "NonpositiveDenominator"


class LineSearchFailed(RobCSPError, RuntimeError):
    code = "LineSearchFailed"

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DegenerateVariance(RobCSPError, ValueError):
    code = "DegenerateVariance"


class EmptyTestSet(RobCSPError, ValueError):
    code = "EmptyTestSet"


class ParseError(RobCSPError, ValueError):
    code = "ParseError"


class ShapeMismatch(RobCSPError, ValueError):
    code = "ShapeMismatch"
