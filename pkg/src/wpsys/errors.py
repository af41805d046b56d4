"""Exception types shared across the package."""


class UnknownType(LookupError):
    """A surface type is not covered by the loaded volume table."""


class ArityMismatch(ValueError):
    """Length vector does not match the number of boundary components."""


class ToleranceNotMet(ArithmeticError):
    """Adaptive quadrature or root finding ran out of budget before converging."""


class EmptyRange(ValueError):
    """A requested complexity lies outside the admissible range."""
