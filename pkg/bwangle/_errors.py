class BwangleError(Exception):
    """Base class of every error raised on purpose by `bwangle`"""


class InvalidSpace(BwangleError, ValueError):
    """The space descriptor, or a vector given for it, is not valid"""


class ZeroWeight(BwangleError, ValueError):
    """A vector has zero weight where a non-zero vector is required"""


class NotPositiveDefinite(BwangleError, ValueError):
    """The operation requires a positive definite weight"""


class NumericalFailure(BwangleError, ArithmeticError):
    """A quantity that cannot vanish or overflow did so (e.g. Sigma = 0)"""


class ParameterOutOfRange(BwangleError, ValueError):
    """A closed-form parameter lies outside the range where the formula holds"""
