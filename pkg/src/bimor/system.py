"""Bilinear state-space models, Petrov-Galerkin projection, error-system
assembly, and fixed-step time-domain simulation."""

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateSubspaceError,
    DivergenceError,
    ObliqueProjectionError,
    ValidationError,
)

__all__ = [
    "BilinearSystem",
    "Trajectory",
    "project",
    "biorthonormalize",
    "error_system",
    "simulate",
]

_RANK_TOL = 1e-12
_DEFAULT_STEPS = 10**4


@dataclass(frozen=True)
class BilinearSystem:
    """State-space data (A, N_k, B, C) of a bilinear control system.

    Doubles as the reduced-order model; immutable value object.
    """

    A: np.ndarray
    N: tuple
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValidationError(f"A must be square, got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValidationError("A has non-finite entries")
        if B.shape[0] != n:
            raise ValidationError(f"B must have {n} rows, got {B.shape}")
        if C.shape[1] != n:
            raise ValidationError(f"C must have {n} columns, got {C.shape}")
        N = tuple(np.atleast_2d(np.asarray(Nk, dtype=float)) for Nk in self.N)
        if len(N) != B.shape[1]:
            raise ValidationError(
                f"need one N matrix per input: len(N)={len(N)}, m={B.shape[1]}"
            )
        for Nk in N:
            if Nk.shape != (n, n):
                raise ValidationError(f"every N_k must be {n}x{n}, got {Nk.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def order(self):
        return self.A.shape[0]

    @property
    def num_inputs(self):
        return self.B.shape[1]

    @property
    def num_outputs(self):
        return self.C.shape[0]

    def is_hurwitz(self):
        return np.max(np.linalg.eigvals(self.A).real) < 0


@dataclass(frozen=True)
class Trajectory:
    """Simulation result on a strictly increasing time grid."""

    times: np.ndarray
    outputs: np.ndarray  # (len(times), p)
    states: np.ndarray = None  # (len(times), n) or None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        y = np.asarray(self.outputs, dtype=float)
        if y.shape[0] != t.shape[0]:
            raise ValidationError("times and outputs must have equal length")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "outputs", y)
        if self.states is not None:
            x = np.asarray(self.states, dtype=float)
            if x.shape[0] != t.shape[0]:
                raise ValidationError("times and states must have equal length")
            object.__setattr__(self, "states", x)


def project(sys, V, W):
    """Petrov-Galerkin projection (W^T A V, {W^T N_k V}, W^T B, C V).

    Does not bi-orthonormalize: the pseudo-optimal algorithms deliberately
    use bases with W^T V != I.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    n = sys.order
    if V.shape[0] != n or W.shape[0] != n or V.shape[1] != W.shape[1]:
        raise ValidationError(
            f"basis shapes {V.shape}, {W.shape} incompatible with order {n}"
        )
    return BilinearSystem(
        A=W.T @ sys.A @ V,
        N=tuple(W.T @ Nk @ V for Nk in sys.N),
        B=W.T @ sys.B,
        C=sys.C @ V,
    )


def biorthonormalize(V_raw, W_raw):
    """Return (V, W) with orthonormal V columns and W^T V = I."""
    V_raw = np.atleast_2d(np.asarray(V_raw, dtype=float))
    W_raw = np.atleast_2d(np.asarray(W_raw, dtype=float))
    if V_raw.shape != W_raw.shape:
        raise ValidationError("V_raw and W_raw must have equal shapes")
    for name, M in (("V_raw", V_raw), ("W_raw", W_raw)):
        sv = np.linalg.svd(M, compute_uv=False)
        if sv[-1] < _RANK_TOL * sv[0]:
            raise DegenerateSubspaceError(
                f"{name} is numerically rank deficient "
                f"(sigma_min/sigma_max = {sv[-1] / sv[0]:.3e})"
            )
    V, _ = np.linalg.qr(V_raw)
    W, _ = np.linalg.qr(W_raw)
    VTW = V.T @ W
    sv = np.linalg.svd(VTW, compute_uv=False)
    if sv[-1] < _RANK_TOL * max(sv[0], 1.0):
        raise ObliqueProjectionError(
            f"V^T W numerically singular (sigma_min = {sv[-1]:.3e})"
        )
    W = W @ np.linalg.inv(VTW)
    return V, W


def error_system(full, rom):
    """Block-diagonal realization of the difference full - rom."""
    if full.num_inputs != rom.num_inputs or full.num_outputs != rom.num_outputs:
        raise ValidationError(
            "full and reduced systems must share input/output dimensions"
        )
    n, r = full.order, rom.order
    A_e = np.zeros((n + r, n + r))
    A_e[:n, :n] = full.A
    A_e[n:, n:] = rom.A
    N_e = []
    for Nk, Nk_r in zip(full.N, rom.N):
        Nek = np.zeros((n + r, n + r))
        Nek[:n, :n] = Nk
        Nek[n:, n:] = Nk_r
        N_e.append(Nek)
    B_e = np.vstack([full.B, rom.B])
    C_e = np.hstack([full.C, -rom.C])
    return BilinearSystem(A=A_e, N=tuple(N_e), B=B_e, C=C_e)


def _bilinear_rhs(sys, x, u_val):
    dx = sys.A @ x + sys.B @ u_val
    for Nk, uk in zip(sys.N, u_val):
        dx += Nk @ x * uk
    return dx


def simulate(sys, u, x0=None, band=None, step=None, keep_states=False):
    """Integrate the bilinear ODE with classical fixed-step RK4.

    `u` is a callable t -> input vector (scalars accepted for single-input
    systems). Default step is (hi - lo) / 1e4.
    """
    if band is None:
        raise ValidationError("a finite TimeBand is required")
    if band.is_infinite:
        raise ValidationError("simulation requires a finite time band")
    if step is None:
        step = (band.hi - band.lo) / _DEFAULT_STEPS
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    if x0 is None:
        x0 = np.zeros(sys.order)
    x = np.asarray(x0, dtype=float).reshape(sys.order)

    def u_at(t):
        val = np.asarray(u(t), dtype=float).reshape(-1)
        if val.shape[0] != sys.num_inputs:
            raise ValidationError(
                f"input signal returned {val.shape[0]} values, expected {sys.num_inputs}"
            )
        return val

    n_steps = int(np.ceil((band.hi - band.lo) / step - 1e-12))
    times = band.lo + step * np.arange(n_steps + 1)
    times[-1] = band.hi
    outputs = np.empty((n_steps + 1, sys.num_outputs))
    states = np.empty((n_steps + 1, sys.order)) if keep_states else None
    outputs[0] = sys.C @ x
    if keep_states:
        states[0] = x
    for i in range(n_steps):
        t, h = times[i], times[i + 1] - times[i]
        k1 = _bilinear_rhs(sys, x, u_at(t))
        k2 = _bilinear_rhs(sys, x + 0.5 * h * k1, u_at(t + 0.5 * h))
        k3 = _bilinear_rhs(sys, x + 0.5 * h * k2, u_at(t + 0.5 * h))
        k4 = _bilinear_rhs(sys, x + h * k3, u_at(t + h))
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(
                f"state became non-finite at t = {times[i + 1]:.6g}",
                time=times[i + 1],
            )
        outputs[i + 1] = sys.C @ x
        if keep_states:
            states[i + 1] = x
    return Trajectory(times=times, outputs=outputs, states=states)
