"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedOrderError(ValueError):
    """The Legendre-Q oracle declines an order it cannot compute reliably."""


class OracleConsistencyError(RuntimeError):
    """An internal consistency check of an oracle failed; indicates a bug."""


class QuadratureConvergenceError(RuntimeError):
    """Quadrature did not converge within the subinterval budget.

    Carries the best partial result in :attr:`partial`.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BenchmarkAgreementError(RuntimeError):
    """The two routes of a timed benchmark pair disagreed on the value."""


class InsufficientDataError(ValueError):
    """Not enough data points to perform a requested fit."""
