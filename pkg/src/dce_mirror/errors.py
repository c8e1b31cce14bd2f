"""Exception types shared across the package."""


class DomainError(ValueError):
    """Parameter point where a quantity is undefined or a contract is violated."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to meet its tolerance within the evaluation budget."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BracketError(ValueError):
    """The objective has no interior maximum on the requested bracket."""
