"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """An iterative method exhausted its term or subdivision budget."""


class GridMismatchError(ValueError):
    """Two curves were compared on different abscissae."""
