"""Exception hierarchy shared across the package."""


class BimorError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(BimorError):
    """Malformed input: wrong shapes, bad bands, bad flags."""


class NumericalError(BimorError):
    """A numerical operation failed (singular operator, branch cut, ...)."""


class BranchCutError(NumericalError):
    """Matrix logarithm requested for a matrix with an eigenvalue on the
    closed negative real axis."""


class SolverError(NumericalError):
    """Matrix-equation solve failed (overlapping spectra, singular
    vectorized operator, size cap exceeded)."""


class DegenerateSubspaceError(NumericalError):
    """Rank-deficient raw basis passed to bi-orthonormalization."""


class ObliqueProjectionError(NumericalError):
    """V^T W numerically singular; the oblique projector does not exist."""


class DivergenceError(NumericalError):
    """Time integration produced a non-finite state."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class StabilityGuardError(NumericalError):
    """Iteration kept producing unstable iterates past the retry budget."""


class ConvergenceError(BimorError):
    """Iterative algorithm hit its iteration cap without converging."""


class ConsistencyError(NumericalError):
    """Two independent computation routes disagreed beyond tolerance."""
