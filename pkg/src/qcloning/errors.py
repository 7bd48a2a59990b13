class ParameterError(ValueError):
    """A user-supplied parameter violates a documented range or constraint."""


class InvariantError(ArithmeticError):
    """A computed object fails a structural check (unitarity, positivity, ...)."""
