"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition or invariant."""


class SolverFailure(RuntimeError):
    """Raised when the dispatch solver cannot deliver a usable solution."""
