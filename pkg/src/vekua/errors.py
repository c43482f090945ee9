"""Exception hierarchy shared by all modules."""


class VekuaError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(VekuaError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprDomainError(VekuaError):
    """Evaluation left the domain of a function (log 0, division by zero, ...)."""

    def __init__(self, message, subexpr=None):
        if subexpr is not None:
            message = f"{message} in '{subexpr}'"
        super().__init__(message)
        self.subexpr = subexpr


class ZeroDivisorError(VekuaError, ZeroDivisionError):
    pass


class CompatibilityError(VekuaError):
    """The integrand of an antiderivative operator is not an exact differential."""


class DegeneratePair(VekuaError):
    pass


class ConditionSViolation(VekuaError):
    pass


class PhiDegenerate(VekuaError):
    pass


class NotPseudoanalytic(VekuaError):
    pass


class QuadratureError(VekuaError):
    pass


class CoefficientError(VekuaError):
    """Invalid elliptic coefficients (vanishing p or u0, branch trouble, non-solution)."""


class DomainError(VekuaError):
    """Invalid solver domain (center outside, not star-shaped)."""


class ConfigError(VekuaError):
    pass


class RankDeficient(UserWarning):
    """The collocation matrix is numerically rank deficient; the fit is still returned."""
