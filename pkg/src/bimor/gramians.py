"""Gramian-type matrix equations: infinite, time-limited, frequency-limited
reachability/observability gramians, the full/ROM cross gramians, and the
R/S matrices of the optimality analysis.

Every equation is compiled into a GeneralizedLyapunovProblem and handed to
the single solver engine; there is exactly one solve path.
"""

from dataclasses import dataclass

import numpy as np

from .bands import FreqBand, TimeBand
from .exceptions import NumericalError, ValidationError
from .matfun import freq_indicator, mat_exp
from .solvers import GeneralizedLyapunovProblem, default_mode, solve_generalized

__all__ = [
    "GramianSet",
    "CrossGramianPair",
    "RSMatrices",
    "gramians_infinite",
    "gramians_time_limited",
    "gramians_freq_limited",
    "gramians_for",
    "cross_gramians_infinite",
    "cross_gramians_time",
    "cross_gramians_freq",
    "rs_matrices_time",
    "rs_matrices_freq",
]

_SYM_TOL = 1e-10


def _check_symmetric(M, what):
    scale = max(np.linalg.norm(M), 1.0)
    if np.linalg.norm(M - M.T) > _SYM_TOL * scale:
        raise NumericalError(f"{what} lost symmetry beyond tolerance")


@dataclass(frozen=True)
class GramianSet:
    """Reachability/observability pair of one kind, with provenance."""

    P: np.ndarray
    Q: np.ndarray
    kind: str  # "infinite" | "time" | "freq"
    band: object  # None, TimeBand, or FreqBand
    mode: object  # SolveMode that produced the pair

    def __post_init__(self):
        _check_symmetric(self.P, "P gramian")
        _check_symmetric(self.Q, "Q gramian")

    def eigenvalue_floors(self):
        """Most negative eigenvalue of each gramian; truncated-series
        solutions may be slightly indefinite and we report, not mask."""
        return (np.min(np.linalg.eigvalsh(self.P)),
                np.min(np.linalg.eigvalsh(self.Q)))


@dataclass(frozen=True)
class CrossGramianPair:
    """Mixed full/ROM Sylvester solutions (n x r)."""

    Phat: np.ndarray
    Qhat: np.ndarray
    kind: str
    band: object
    mode: object


@dataclass(frozen=True)
class RSMatrices:
    """R (n x r) couples full and ROM data; S (r x r) uses ROM data only."""

    R: np.ndarray
    S: np.ndarray
    kind: str
    band: object
    mode: object


def _require_hurwitz(sys, what="A"):
    if not sys.is_hurwitz():
        raise NumericalError(f"{what} is not Hurwitz")


def _exp_pair(A, band):
    """e^(A lo) and e^(A hi); the hi factor is zero for an infinite band
    (valid for Hurwitz A)."""
    n = A.shape[0]
    E1 = np.eye(n) if band.lo == 0.0 else mat_exp(A, band.lo)
    E2 = np.zeros((n, n)) if band.is_infinite else mat_exp(A, band.hi)
    return E1, E2


def _mode_for(mode, n1, n2):
    return default_mode(n1, n2) if mode is None else mode


# -- gramians of a single system ---------------------------------------------


def gramians_infinite(sys, mode=None):
    _require_hurwitz(sys)
    mode = _mode_for(mode, sys.order, sys.order)
    A, B, C = sys.A, sys.B, sys.C
    P = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=A,
        product_terms=tuple((Nk, Nk, +1) for Nk in sys.N),
        constant=B @ B.T), mode)
    Q = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=A.T,
        product_terms=tuple((Nk.T, Nk.T, +1) for Nk in sys.N),
        constant=C.T @ C), mode)
    return GramianSet(P=P, Q=Q, kind="infinite", band=None, mode=mode)


def gramians_time_limited(sys, band, mode=None):
    if not isinstance(band, TimeBand):
        raise ValidationError("band must be a TimeBand")
    if band.is_infinite:
        _require_hurwitz(sys)
    mode = _mode_for(mode, sys.order, sys.order)
    A, B, C = sys.A, sys.B, sys.C
    E1, E2 = _exp_pair(A, band)
    p_terms = []
    q_terms = []
    for Nk in sys.N:
        p_terms += [(E1 @ Nk, E1 @ Nk, +1), (E2 @ Nk, E2 @ Nk, -1)]
        q_terms += [(E1.T @ Nk.T, E1.T @ Nk.T, +1), (E2.T @ Nk.T, E2.T @ Nk.T, -1)]
    P = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=A,
        product_terms=tuple(p_terms),
        constant=E1 @ B @ B.T @ E1.T - E2 @ B @ B.T @ E2.T), mode)
    Q = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=A.T,
        product_terms=tuple(q_terms),
        constant=E1.T @ C.T @ C @ E1 - E2.T @ C.T @ C @ E2), mode)
    return GramianSet(P=P, Q=Q, kind="time", band=band, mode=mode)


def gramians_freq_limited(sys, band, mode=None):
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    _require_hurwitz(sys)
    mode = _mode_for(mode, sys.order, sys.order)
    A, B, C = sys.A, sys.B, sys.C
    F = freq_indicator(A, band)
    p_terms = []
    q_terms = []
    for Nk in sys.N:
        p_terms += [(F @ Nk, Nk, +1), (Nk, F @ Nk, +1)]
        q_terms += [(F.T @ Nk.T, Nk.T, +1), (Nk.T, F.T @ Nk.T, +1)]
    P = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=A,
        product_terms=tuple(p_terms),
        constant=F @ B @ B.T + B @ B.T @ F.T), mode)
    Q = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=A.T,
        product_terms=tuple(q_terms),
        constant=F.T @ C.T @ C + C.T @ C @ F), mode)
    return GramianSet(P=P, Q=Q, kind="freq", band=band, mode=mode)


def gramians_for(sys, kind, band=None, mode=None):
    """Dispatch on kind string: 'infinite' | 'time' | 'freq'."""
    if kind == "infinite":
        return gramians_infinite(sys, mode)
    if kind == "time":
        return gramians_time_limited(sys, band, mode)
    if kind == "freq":
        return gramians_freq_limited(sys, band, mode)
    raise ValidationError(f"unknown gramian kind {kind!r}")


# -- cross gramians of a full/ROM pair ---------------------------------------


def _check_pair(full, rom):
    if full.num_inputs != rom.num_inputs or full.num_outputs != rom.num_outputs:
        raise ValidationError("full and reduced systems must share m and p")


def cross_gramians_infinite(full, rom, mode=None):
    _check_pair(full, rom)
    mode = _mode_for(mode, full.order, rom.order)
    A, B, C = full.A, full.B, full.C
    Ar, Br, Cr = rom.A, rom.B, rom.C
    Phat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=Ar,
        product_terms=tuple((Nk, Nrk, +1) for Nk, Nrk in zip(full.N, rom.N)),
        constant=B @ Br.T), mode)
    Qhat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=Ar.T,
        product_terms=tuple((Nk.T, Nrk.T, +1) for Nk, Nrk in zip(full.N, rom.N)),
        constant=-C.T @ Cr), mode)
    return CrossGramianPair(Phat=Phat, Qhat=Qhat, kind="infinite", band=None, mode=mode)


def cross_gramians_time(full, rom, band, mode=None):
    if not isinstance(band, TimeBand):
        raise ValidationError("band must be a TimeBand")
    _check_pair(full, rom)
    mode = _mode_for(mode, full.order, rom.order)
    A, B, C = full.A, full.B, full.C
    Ar, Br, Cr = rom.A, rom.B, rom.C
    E1, E2 = _exp_pair(A, band)
    G1, G2 = _exp_pair(Ar, band)
    p_terms = []
    q_terms = []
    for Nk, Nrk in zip(full.N, rom.N):
        p_terms += [(E1 @ Nk, G1 @ Nrk, +1), (E2 @ Nk, G2 @ Nrk, -1)]
        q_terms += [(E1.T @ Nk.T, G1.T @ Nrk.T, +1), (E2.T @ Nk.T, G2.T @ Nrk.T, -1)]
    Phat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=Ar,
        product_terms=tuple(p_terms),
        constant=E1 @ B @ Br.T @ G1.T - E2 @ B @ Br.T @ G2.T), mode)
    Qhat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=Ar.T,
        product_terms=tuple(q_terms),
        constant=-E1.T @ C.T @ Cr @ G1 + E2.T @ C.T @ Cr @ G2), mode)
    return CrossGramianPair(Phat=Phat, Qhat=Qhat, kind="time", band=band, mode=mode)


def cross_gramians_freq(full, rom, band, mode=None):
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    _check_pair(full, rom)
    mode = _mode_for(mode, full.order, rom.order)
    A, B, C = full.A, full.B, full.C
    Ar, Br, Cr = rom.A, rom.B, rom.C
    F = freq_indicator(A, band)
    Fr = freq_indicator(Ar, band)
    p_terms = []
    q_terms = []
    for Nk, Nrk in zip(full.N, rom.N):
        p_terms += [(F @ Nk, Nrk, +1), (Nk, Fr @ Nrk, +1)]
        q_terms += [(F.T @ Nk.T, Nrk.T, +1), (Nk.T, Fr.T @ Nrk.T, +1)]
    Phat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A, right_drift=Ar,
        product_terms=tuple(p_terms),
        constant=F @ B @ Br.T + B @ Br.T @ Fr.T), mode)
    Qhat = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=Ar.T,
        product_terms=tuple(q_terms),
        constant=-F.T @ C.T @ Cr - C.T @ Cr @ Fr), mode)
    return CrossGramianPair(Phat=Phat, Qhat=Qhat, kind="freq", band=band, mode=mode)


def cross_gramians_for(full, rom, kind, band=None, mode=None):
    if kind == "infinite":
        return cross_gramians_infinite(full, rom, mode)
    if kind == "time":
        return cross_gramians_time(full, rom, band, mode)
    if kind == "freq":
        return cross_gramians_freq(full, rom, band, mode)
    raise ValidationError(f"unknown gramian kind {kind!r}")


# -- R/S matrices ------------------------------------------------------------


def rs_matrices_time(full, rom, band, mode=None):
    """R and S of the time-limited gradient analysis; [0, tau] bands only
    (the gradient theory is not stated for a generic interval)."""
    if not isinstance(band, TimeBand):
        raise ValidationError("band must be a TimeBand")
    if not band.starts_at_zero:
        raise ValidationError("R/S matrices are defined for [0, tau] bands only")
    _check_pair(full, rom)
    mode = _mode_for(mode, full.order, rom.order)
    A, C = full.A, full.C
    Ar, Cr = rom.A, rom.C
    if band.is_infinite:
        _require_hurwitz(full)
        _require_hurwitz(rom, "reduced A")
    E = np.zeros_like(A) if band.is_infinite else mat_exp(A, band.hi)
    G = np.zeros_like(Ar) if band.is_infinite else mat_exp(Ar, band.hi)
    r_terms = []
    s_terms = []
    for Nk, Nrk in zip(full.N, rom.N):
        r_terms += [(Nk.T, Nrk.T, +1), (Nk.T @ E.T, Nrk.T @ G.T, -1)]
        s_terms += [(Nrk.T, Nrk.T, +1), (Nrk.T @ G.T, Nrk.T @ G.T, -1)]
    R = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=Ar.T,
        product_terms=tuple(r_terms),
        constant=-C.T @ Cr), mode)
    S = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=Ar.T, right_drift=Ar.T,
        product_terms=tuple(s_terms),
        constant=Cr.T @ Cr), mode)
    return RSMatrices(R=R, S=S, kind="time", band=band, mode=mode)


def rs_matrices_freq(full, rom, band, mode=None):
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    _check_pair(full, rom)
    mode = _mode_for(mode, full.order, rom.order)
    A, C = full.A, full.C
    Ar, Cr = rom.A, rom.C
    F = freq_indicator(A, band)
    Fr = freq_indicator(Ar, band)
    r_terms = []
    s_terms = []
    for Nk, Nrk in zip(full.N, rom.N):
        r_terms += [(Nk.T @ F.T, Nrk.T, +1), (Nk.T, Nrk.T @ Fr.T, +1)]
        s_terms += [(Nrk.T, Nrk.T @ Fr.T, +1), (Nrk.T @ Fr.T, Nrk.T, +1)]
    R = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=A.T, right_drift=Ar.T,
        product_terms=tuple(r_terms),
        constant=-C.T @ Cr), mode)
    S = solve_generalized(GeneralizedLyapunovProblem(
        left_drift=Ar.T, right_drift=Ar.T,
        product_terms=tuple(s_terms),
        constant=Cr.T @ Cr), mode)
    return RSMatrices(R=R, S=S, kind="freq", band=band, mode=mode)
