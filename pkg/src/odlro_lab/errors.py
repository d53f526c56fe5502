"""Exception types shared across the package."""


class SolverFailure(RuntimeError):
    """Chemical-potential bisection did not converge."""

    def __init__(self, message, bracket):
        super().__init__(f"{message} (bracket={bracket!r})")
        self.bracket = bracket


class ConditioningError(ValueError):
    """A Gram matrix is too close to singular to orthogonalize."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


class InvariantViolation(RuntimeError):
    """A computed quantity left its mathematically allowed range."""
