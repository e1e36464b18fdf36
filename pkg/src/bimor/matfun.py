"""Dense matrix-function kernels.

Exponential, principal logarithm, the Frechet derivative of the logarithm,
and the band indicator matrix used by all frequency-limited computations.
Complex arithmetic stays inside this module; every exported result is real
unless the input itself is complex.
"""

import numpy as np
import scipy.linalg as sla

from .bands import FreqBand
from .exceptions import BranchCutError, NumericalError, ValidationError

__all__ = ["mat_exp", "mat_log", "logm_frechet", "freq_indicator"]

_BRANCH_TOL = 1e-13


def _as_square(A, name="A"):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} has non-finite entries")
    return A


def mat_exp(A, t=1.0):
    """e^(A t) by scaling-and-squaring with a Pade approximant."""
    A = _as_square(A)
    if not np.isfinite(t):
        raise ValidationError(f"t must be finite, got {t}")
    return sla.expm(A * t)


def _check_principal_branch(A):
    lam = np.linalg.eigvals(A)
    scale = max(np.max(np.abs(lam)), 1.0)
    on_cut = (lam.real <= _BRANCH_TOL * scale) & (np.abs(lam.imag) <= _BRANCH_TOL * scale)
    if np.any(on_cut):
        raise BranchCutError(
            "matrix has an eigenvalue on the closed negative real axis; "
            f"principal logarithm undefined (offending eigenvalues: {lam[on_cut]})"
        )


def mat_log(A):
    """Principal matrix logarithm (inverse scaling-and-squaring).

    Accepts complex input; raises BranchCutError if any eigenvalue lies on
    the closed negative real axis.
    """
    A = _as_square(A)
    _check_principal_branch(A)
    L = sla.logm(A)
    if np.isrealobj(A) and np.iscomplexobj(L):
        # real input off the branch cut has a real principal log
        if np.max(np.abs(L.imag)) > 1e-10 * max(np.max(np.abs(L.real)), 1.0):
            raise NumericalError("principal logarithm of real input came out complex")
        L = L.real
    return L


def logm_frechet(A, E):
    """Frechet derivative L(A, E) of the matrix logarithm at A in direction E.

    Uses the block-triangular identity: logm([[A, E], [0, A]]) has L(A, E)
    as its upper-right block.
    """
    A = _as_square(A)
    E = _as_square(E, "E")
    if A.shape != E.shape:
        raise ValidationError(f"A and E must have equal shapes, got {A.shape} and {E.shape}")
    _check_principal_branch(A)
    n = A.shape[0]
    block = np.zeros((2 * n, 2 * n), dtype=np.result_type(A, E))
    block[:n, :n] = A
    block[:n, n:] = E
    block[n:, n:] = A
    L = sla.logm(block)[:n, n:]
    if np.isrealobj(A) and np.isrealobj(E) and np.iscomplexobj(L):
        L = L.real
    return L


def _require_hurwitz(A):
    lam = np.linalg.eigvals(A)
    if np.max(lam.real) >= 0:
        raise NumericalError(
            f"matrix is not Hurwitz (spectral abscissa {np.max(lam.real):.3e} >= 0)"
        )


def _indicator_upto(A, omega):
    """Band indicator for [0, omega]: (1/2pi) * integral of (j nu I - A)^-1
    over [-omega, omega].

    Evaluated as the average of the +omega and -omega logarithm branches so
    the result is real up to roundoff by construction.
    """
    n = A.shape[0]
    W_plus = (1j / np.pi) * mat_log(-A - 1j * omega * np.eye(n))
    W_minus = (-1j / np.pi) * mat_log(-A + 1j * omega * np.eye(n))
    return 0.5 * (W_plus + W_minus)


def _indicator_between(A, w1, w2):
    """Band indicator for the symmetric union of [w1, w2], 0 < w1 < w2.

    Evaluated as the endpoint difference of the [0, w] indicators, which
    keeps the band calculus additive and pins the scale to the exact
    [0, inf) limit of I/2.
    """
    return _indicator_upto(A, w2) - _indicator_upto(A, w1)


def freq_indicator(A, band):
    """Frequency indicator matrix of a Hurwitz A over the given band.

    For [0, inf) this is exactly I/2; for [lo, inf) it is I/2 minus the
    [0, lo] indicator. The return value is real; a non-negligible imaginary
    residue raises instead of being silently dropped.
    """
    A = _as_square(A)
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    _require_hurwitz(A)
    n = A.shape[0]
    if band.is_infinite:
        F = 0.5 * np.eye(n).astype(complex)
        if not band.starts_at_zero:
            F = F - _indicator_upto(A, band.lo)
    elif band.starts_at_zero:
        F = _indicator_upto(A, band.hi)
    else:
        F = _indicator_between(A, band.lo, band.hi)
    residue = np.max(np.abs(F.imag)) if np.iscomplexobj(F) else 0.0
    scale = max(np.max(np.abs(F.real)), 1.0)
    if residue > 1e-12 * scale:
        raise NumericalError(
            f"frequency indicator came out complex (imaginary residue {residue:.3e})"
        )
    return np.ascontiguousarray(F.real)
