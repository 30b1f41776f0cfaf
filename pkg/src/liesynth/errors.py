"""Exception hierarchy shared across the package."""


class LieSynthError(Exception):
    """Base class for all errors raised by liesynth."""


class InvalidInput(LieSynthError):
    """Arguments violate a documented precondition."""


class BranchPoint(LieSynthError):
    """Principal logarithm requested for a matrix with an eigenvalue at -1."""


class NoConvergence(LieSynthError):
    """The neighborhood factorization solve did not converge."""


class MNotFound(LieSynthError):
    """No root order M up to the cap admitted a neighborhood factorization."""


class TargetUnreachable(LieSynthError):
    """Target lies outside the group generated by the available matrices."""


class ResidualTooLarge(LieSynthError):
    """Least-squares decomposition residual exceeds the acceptance threshold."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ExhaustedCandidates(LieSynthError):
    """No conjugation time produced a new independent element."""


class SearchBudgetExceeded(LieSynthError):
    """Exhaustive Diophantine search hit its candidate cap before success."""
