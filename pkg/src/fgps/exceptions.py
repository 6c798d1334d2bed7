class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to reach its accuracy target.

    ``estimate`` and ``error`` carry the best value found so far when available.
    """

    def __init__(self, message, estimate=None, error=None, index=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.index = index
