"""Exception types shared across the package."""


class MQEError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSector(MQEError, ValueError):
    pass


class IncompatiblePair(MQEError, ValueError):
    pass


class EmptySector(MQEError, ValueError):
    pass


class UnsupportedSector(MQEError, ValueError):
    pass


class TruncationMismatch(MQEError, ValueError):
    pass


class NotInvertible(MQEError, ZeroDivisionError):
    pass


class NegativeZPoleAtOne(MQEError, ArithmeticError):
    pass


class FractionalTwist(MQEError, ValueError):
    pass


class DivisionByNonUnit(MQEError, ArithmeticError):
    pass


class BadFixedPoint(MQEError, ValueError):
    pass


class SingularWeights(MQEError, ArithmeticError):
    pass


class ReductionDiverged(MQEError, RuntimeError):
    pass


class NoRelationFound(MQEError, RuntimeError):
    pass


class SingularElimination(MQEError, ArithmeticError):
    pass
