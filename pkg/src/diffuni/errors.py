"""Exception types raised across the package."""


class DiffUniError(Exception):
    pass


class ConstructionError(DiffUniError, ValueError):
    """Bad field parameters (degree out of range, reducible modulus)."""


class FieldMismatch(DiffUniError, ValueError):
    """Operands live in different fields."""


class DivisionByZero(DiffUniError, ZeroDivisionError):
    pass


class InvalidArgument(DiffUniError, ValueError):
    pass


class UnsupportedResidue(DiffUniError, ValueError):
    """Degree m falls in a residue class with no closed-form treatment."""


class DegreeDrop(DiffUniError, ArithmeticError):
    """The associated polynomial has degree below its nominal bound."""


class InsufficientDegree(DiffUniError, ValueError):
    pass


class InternalInvariantViolation(DiffUniError, AssertionError):
    pass
