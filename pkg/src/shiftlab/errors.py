"""Exception types raised across shiftlab."""


class ShiftlabError(Exception):
    """Base class for all shiftlab errors."""


class IndexOutOfTable(ShiftlabError, LookupError):
    """A tabulated weight sequence was queried outside its index range."""


class WeightOverflowInCoefficient(ShiftlabError, ArithmeticError):
    """An evolved coefficient does not fit in a double; use the log-norm path."""


class ZeroVector(ShiftlabError, ValueError):
    """An operation that needs a nonzero vector received the zero vector."""


class IndexNotInSupport(ShiftlabError, KeyError):
    """The requested basis index carries no coefficient."""


class UndefinedAtKink(ShiftlabError, ValueError):
    """A weight-function derivative was requested at its kink."""
