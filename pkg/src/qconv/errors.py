"""Exception types shared by every module."""


class QConvError(Exception):
    """Base class for all errors raised by qconv."""


class PoleError(QConvError, ZeroDivisionError):
    """Argument lies on (or within tolerance of) a pole."""


class TruncationError(QConvError, ArithmeticError):
    """An infinite sum or product failed to converge within ``max_terms``."""


class DomainError(QConvError, ValueError):
    """Argument outside the domain of the operation."""


class MismatchError(QConvError, ValueError):
    """Operands live on different lattices."""


class NotInvertibleError(QConvError, ArithmeticError):
    """Series or function has no inverse (vanishing constant term)."""


class RadiusError(QConvError, ArithmeticError):
    """A radius-of-convergence precondition is violated."""


class InsufficientDataError(QConvError, ValueError):
    """Too few coefficients to estimate a growth quantity."""


class TypeGrowthError(QConvError, ArithmeticError):
    """Moment growth types do not satisfy a required inequality."""


class NoRadiusError(RadiusError):
    """No q-shift can bring a zero-free radius above the required threshold."""
