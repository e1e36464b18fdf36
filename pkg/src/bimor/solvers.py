"""Dense solvers for standard and generalized Lyapunov/Sylvester equations.

Every matrix equation in the package is compiled into a
GeneralizedLyapunovProblem,

    left_drift @ X + X @ right_drift.T
        + sum_i sign_i * L_i @ X @ R_i.T + constant = 0,

and solved here, either exactly via Kronecker vectorization (Direct) or by
truncated fixed-point sweeps on the drift Sylvester operator (FixedPoint).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .exceptions import SolverError, ValidationError

__all__ = [
    "GeneralizedLyapunovProblem",
    "Direct",
    "FixedPoint",
    "default_mode",
    "solve_sylvester",
    "solve_generalized",
]

#: largest n1*n2 for which the dense Kronecker operator is formed
DIRECT_SIZE_CAP = 10**6

#: above this dimension the default mode switches to fixed-point sweeps
DIRECT_DIM_THRESHOLD = 60

DEFAULT_SWEEPS = 3


@dataclass(frozen=True)
class GeneralizedLyapunovProblem:
    left_drift: np.ndarray
    right_drift: np.ndarray
    product_terms: tuple  # of (L_i, R_i, sign)
    constant: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.left_drift, dtype=float)
        B = np.asarray(self.right_drift, dtype=float)
        K = np.asarray(self.constant, dtype=float)
        n1, n2 = A.shape[0], B.shape[0]
        if A.shape != (n1, n1) or B.shape != (n2, n2):
            raise ValidationError("drift matrices must be square")
        if K.shape != (n1, n2):
            raise ValidationError(
                f"constant must be {n1}x{n2}, got {K.shape}"
            )
        terms = []
        for L, R, sign in self.product_terms:
            L = np.asarray(L, dtype=float)
            R = np.asarray(R, dtype=float)
            if L.shape != (n1, n1) or R.shape != (n2, n2):
                raise ValidationError("product term has inconsistent dimensions")
            if sign not in (+1, -1):
                raise ValidationError(f"term sign must be +1 or -1, got {sign}")
            terms.append((L, R, sign))
        object.__setattr__(self, "left_drift", A)
        object.__setattr__(self, "right_drift", B)
        object.__setattr__(self, "constant", K)
        object.__setattr__(self, "product_terms", tuple(terms))

    @property
    def shape(self):
        return self.left_drift.shape[0], self.right_drift.shape[0]


@dataclass(frozen=True)
class Direct:
    """Exact solve through Kronecker vectorization."""

    size_cap: int = DIRECT_SIZE_CAP


@dataclass(frozen=True)
class FixedPoint:
    """Truncated fixed-point sweeps on the drift Sylvester operator.

    Starting from the drift-only solution, each sweep folds the product
    terms evaluated at the previous iterate into the constant; max_sweeps
    counts these update sweeps. Truncated output is a defined, reproducible
    result, not an error.
    """

    max_sweeps: int = DEFAULT_SWEEPS
    residual_tol: float = 0.0
    last_relative_change: list = field(default_factory=list, compare=False)

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValidationError("max_sweeps must be >= 1")


def default_mode(n1, n2, sweeps=DEFAULT_SWEEPS):
    """Direct for desk-scale problems, fixed-point sweeps beyond."""
    if max(n1, n2) > DIRECT_DIM_THRESHOLD:
        return FixedPoint(max_sweeps=sweeps)
    return Direct()


def solve_sylvester(A, B, RHS):
    """Solve A X + X B + RHS = 0 for X.

    Requires the spectra of A and -B to be disjoint.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    RHS = np.asarray(RHS, dtype=float)
    if A.shape[0] != RHS.shape[0] or B.shape[0] != RHS.shape[1]:
        raise ValidationError(
            f"incompatible shapes: A {A.shape}, B {B.shape}, RHS {RHS.shape}"
        )
    try:
        X = sla.solve_sylvester(A, B, -RHS)
    except Exception as exc:  # scipy raises LinAlgError or ValueError
        raise SolverError(f"Sylvester solve failed: {exc}") from exc
    if not np.all(np.isfinite(X)):
        raise SolverError("Sylvester solve produced non-finite entries "
                          "(spectra of A and -B likely overlap)")
    scale = np.linalg.norm(A) + np.linalg.norm(B)
    res = np.linalg.norm(A @ X + X @ B + RHS)
    if res > 1e-10 * scale * np.linalg.norm(X) + 1e-12:
        raise SolverError(
            f"Sylvester residual {res:.3e} exceeds the backward-stability "
            "bound (spectra of A and -B likely overlap)"
        )
    # a solution norm at 1/roundoff of the data scale means the operator is
    # numerically singular even though the residual bound above still holds
    if np.linalg.norm(X) * 1e-13 * scale > np.linalg.norm(RHS):
        raise SolverError(
            "Sylvester solution norm implies a numerically singular "
            "operator (spectra of A and -B overlap)"
        )
    return X


def _vectorized_operator(problem):
    A, B = problem.left_drift, problem.right_drift
    n1, n2 = problem.shape
    op = np.kron(np.eye(n2), A) + np.kron(B, np.eye(n1))
    for L, R, sign in problem.product_terms:
        op += sign * np.kron(R, L)
    return op


def _solve_direct(problem, mode):
    n1, n2 = problem.shape
    if n1 * n2 > mode.size_cap:
        raise SolverError(
            f"Direct mode size cap exceeded: {n1}*{n2} > {mode.size_cap}"
        )
    op = _vectorized_operator(problem)
    rhs = -problem.constant.reshape(-1, order="F")
    try:
        x = np.linalg.solve(op, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular vectorized operator: {exc}") from exc
    return x.reshape((n1, n2), order="F")


def _solve_fixed_point(problem, mode):
    A, B = problem.left_drift, problem.right_drift
    X = solve_sylvester(A, B.T, problem.constant)
    changes = []
    for _ in range(mode.max_sweeps):
        K = problem.constant.copy()
        for L, R, sign in problem.product_terms:
            K += sign * (L @ X @ R.T)
        X_new = solve_sylvester(A, B.T, K)
        denom = np.linalg.norm(X_new)
        changes.append(np.linalg.norm(X_new - X) / denom if denom > 0 else 0.0)
        X = X_new
        if mode.residual_tol > 0 and changes[-1] < mode.residual_tol:
            break
    mode.last_relative_change.clear()
    mode.last_relative_change.extend(changes)
    return X


def solve_generalized(problem, mode=None):
    """Solve a GeneralizedLyapunovProblem in the requested mode.

    Direct is exact to roundoff and serves as the correctness oracle;
    FixedPoint reproduces the truncated series solution (sweep k equals the
    order-k truncation of the underlying kernel series).
    """
    if mode is None:
        mode = default_mode(*problem.shape)
    if isinstance(mode, Direct):
        return _solve_direct(problem, mode)
    if isinstance(mode, FixedPoint):
        return _solve_fixed_point(problem, mode)
    raise ValidationError(f"unknown solve mode: {mode!r}")
