"""Gradients of the time-limited squared error norm, first-order
optimality-condition residuals for both limited problems, and the
trace-identity utility used to validate the adjoint equations."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .bands import FreqBand, TimeBand
from .exceptions import NumericalError, ValidationError
from .gramians import (
    cross_gramians_freq,
    cross_gramians_time,
    gramians_freq_limited,
    gramians_time_limited,
    rs_matrices_freq,
    rs_matrices_time,
)
from .matfun import logm_frechet, mat_exp
from .solvers import GeneralizedLyapunovProblem, default_mode, solve_generalized

__all__ = [
    "GradientBundle",
    "ResidualReport",
    "gradient_h2tau",
    "residuals_time",
    "residuals_freq",
    "lemma1_check",
]


@dataclass(frozen=True)
class GradientBundle:
    dA: np.ndarray
    dN: tuple
    dB: np.ndarray
    dC: np.ndarray
    Y_tau: np.ndarray
    Z_tau: tuple  # one auxiliary per bilinear map


@dataclass(frozen=True)
class ResidualReport:
    cond_A: float
    cond_N: float
    cond_B: float
    cond_C: float
    scale: float
    mat_B: np.ndarray  # raw input-map condition residual (r x m)
    mat_C: np.ndarray  # raw output-map condition residual (p x r)

    def normalized(self):
        return tuple(c / self.scale for c in
                     (self.cond_A, self.cond_N, self.cond_B, self.cond_C))


def _exp_integral(A, M, tau):
    """integral over [0, tau] of e^(A (tau - s)) M e^(A s) ds via the
    upper-right block of a 2r x 2r exponential."""
    r = A.shape[0]
    block = np.zeros((2 * r, 2 * r))
    block[:r, :r] = A
    block[:r, r:] = M
    block[r:, r:] = A
    return sla.expm(tau * block)[:r, r:]


def _require_hurwitz(A, what):
    if np.max(np.linalg.eigvals(A).real) >= 0:
        raise NumericalError(f"{what} is not Hurwitz")


def _time_quantities(full, rom, band, mode):
    if not isinstance(band, TimeBand):
        raise ValidationError("band must be a TimeBand")
    if not band.starts_at_zero:
        raise ValidationError(
            "gradients/conditions are stated for [0, tau] windows only"
        )
    _require_hurwitz(full.A, "A")
    _require_hurwitz(rom.A, "reduced A")
    g_rom = gramians_time_limited(rom, band, mode)
    cross = cross_gramians_time(full, rom, band, mode)
    rs = rs_matrices_time(full, rom, band, mode)
    return g_rom, cross, rs


def gradient_h2tau(full, rom, band, mode=None):
    """Gradients of the squared time-limited error norm with respect to the
    reduced matrices.

    The auxiliary drift term keeps the exponential's directional derivative
    as a true integral (block-exponential form); it collapses to the
    commuting tau * (...) e^(A^T tau) shorthand only when the factors
    commute.
    """
    mode = default_mode(full.order, rom.order) if mode is None else mode
    g_rom, cross, rs = _time_quantities(full, rom, band, mode)
    P_r, Q_r = g_rom.P, g_rom.Q
    Phat, Qhat = cross.Phat, cross.Qhat
    R, S = rs.R, rs.S
    r = rom.order
    if band.is_infinite:
        Y = np.zeros((r, r))
        Z = tuple(np.zeros((r, r)) for _ in rom.N)
    else:
        tau = band.hi
        E = mat_exp(full.A, tau)
        G = mat_exp(rom.A, tau)
        ArT = rom.A.T
        M = R.T @ E @ full.B @ rom.B.T + S @ G @ rom.B @ rom.B.T
        for Nk, Nrk in zip(full.N, rom.N):
            M = M + R.T @ E @ Nk @ Phat @ Nrk.T + S @ G @ Nrk @ P_r @ Nrk.T
        Y = _exp_integral(ArT, M, tau)
        Z = tuple(
            G.T @ R.T @ E @ Nk @ Phat + G.T @ S @ G @ Nrk @ P_r
            for Nk, Nrk in zip(full.N, rom.N)
        )
    dA = 2.0 * (R.T @ Phat + S @ P_r - Y)
    dN = tuple(
        2.0 * (R.T @ Nk @ Phat + S @ Nrk @ P_r - Zk)
        for Nk, Nrk, Zk in zip(full.N, rom.N, Z)
    )
    dB = 2.0 * (Qhat.T @ full.B + Q_r @ rom.B)
    dC = 2.0 * (-full.C @ Phat + rom.C @ P_r)
    return GradientBundle(dA=dA, dN=dN, dB=dB, dC=dC, Y_tau=Y, Z_tau=Z)


def residuals_time(full, rom, band, mode=None):
    """Frobenius residuals of the four time-limited optimality conditions."""
    grad = gradient_h2tau(full, rom, band, mode)
    mat_B = 0.5 * grad.dB
    mat_C = -0.5 * grad.dC  # C Phat - Cr Pr convention
    cross = cross_gramians_time(full, rom, band, mode)
    scale = max(1.0, np.linalg.norm(full.C) * np.linalg.norm(cross.Phat))
    return ResidualReport(
        cond_A=float(np.linalg.norm(0.5 * grad.dA)),
        cond_N=float(np.linalg.norm(sum(0.5 * dNk for dNk in grad.dN))),
        cond_B=float(np.linalg.norm(mat_B)),
        cond_C=float(np.linalg.norm(mat_C)),
        scale=float(scale),
        mat_B=mat_B,
        mat_C=mat_C,
    )


def _indicator_derivative_term(Ar, band, direction):
    """Adjoint contribution of the band indicator's dependence on the
    reduced drift: Real((j/pi) L(-Ar - j w I, direction)) at the upper band
    edge minus the same at the lower edge."""
    r = Ar.shape[0]
    eye = np.eye(r)

    def edge(w):
        Lc = logm_frechet(-(Ar + 0j) - 1j * w * eye, direction.astype(complex))
        return ((1j / np.pi) * Lc).real

    if band.is_infinite:
        upper = np.zeros((r, r))
    else:
        upper = edge(band.hi)
    lower = np.zeros((r, r)) if band.starts_at_zero else edge(band.lo)
    return upper - lower


def residuals_freq(full, rom, band, mode=None):
    """Frobenius residuals of the four frequency-limited optimality
    conditions."""
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    _require_hurwitz(full.A, "A")
    _require_hurwitz(rom.A, "reduced A")
    from .matfun import freq_indicator

    g_rom = gramians_freq_limited(rom, band, mode)
    cross = cross_gramians_freq(full, rom, band, mode)
    rs = rs_matrices_freq(full, rom, band, mode)
    P_r, Q_r = g_rom.P, g_rom.Q
    Phat, Qhat = cross.Phat, cross.Qhat
    R, S = rs.R, rs.S
    F = freq_indicator(full.A, band)
    F_r = freq_indicator(rom.A, band)

    S1 = sum(Nrk @ P_r @ Nrk.T @ S for Nrk in rom.N) + rom.B @ rom.B.T @ S
    S2 = (sum(Nrk @ Phat.T @ Nk.T @ R for Nrk, Nk in zip(rom.N, full.N))
          + rom.B @ full.B.T @ R)
    W1 = _indicator_derivative_term(rom.A, band, S1)
    W2 = _indicator_derivative_term(rom.A, band, S2)
    mat_A = R.T @ Phat + S @ P_r - W1.T - W2.T
    mat_N = sum(
        (R.T @ F + F_r.T @ R.T) @ Nk @ Phat + (F_r.T @ S + S @ F_r) @ Nrk @ P_r
        for Nk, Nrk in zip(full.N, rom.N)
    )
    mat_B = Qhat.T @ full.B + Q_r @ rom.B
    mat_C = full.C @ Phat - rom.C @ P_r
    scale = max(1.0, np.linalg.norm(full.C) * np.linalg.norm(Phat))
    return ResidualReport(
        cond_A=float(np.linalg.norm(mat_A)),
        cond_N=float(np.linalg.norm(mat_N)),
        cond_B=float(np.linalg.norm(mat_B)),
        cond_C=float(np.linalg.norm(mat_C)),
        scale=float(scale),
        mat_B=mat_B,
        mat_C=mat_C,
    )


def lemma1_check(A_like, At_like, N_list, Nt_list, tau, O1, O2, mode=None):
    """Solve the paired adjoint equations and return both traces; the two
    must agree for any admissible data."""
    A = np.asarray(A_like, dtype=float)
    At = np.asarray(At_like, dtype=float)
    O1 = np.asarray(O1, dtype=float)
    O2 = np.asarray(O2, dtype=float)
    n, r = A.shape[0], At.shape[0]
    E = np.zeros((n, n)) if np.isinf(tau) else mat_exp(A, tau)
    G = np.zeros((r, r)) if np.isinf(tau) else mat_exp(At, tau)
    mode = default_mode(n, r) if mode is None else mode
    l_terms = []
    z_terms = []
    for Nk, Nrk in zip(N_list, Nt_list):
        Nk = np.asarray(Nk, dtype=float)
        Nrk = np.asarray(Nrk, dtype=float)
        l_terms += [(Nk, Nrk, +1), (E @ Nk, G @ Nrk, -1)]
        z_terms += [(Nrk.T, Nk.T, +1), (Nrk.T @ G.T, Nk.T @ E.T, -1)]
    L = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=At,
        product_terms=tuple(l_terms), constant=O1), mode)
    Z = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=At.T, right_drift=A.T,
        product_terms=tuple(z_terms), constant=O2), mode)
    return float(np.trace(O1 @ Z)), float(np.trace(O2 @ L))
