"""Reduction algorithms: balanced truncation (infinite / time- / frequency-
limited), the bilinear H2 fixed-point iteration and its limited variants,
the two pseudo-optimal algorithms, and the subspace approximation of
exponential/indicator products."""

from dataclasses import dataclass, field

import numpy as np

from .bands import FreqBand, TimeBand
from .exceptions import (
    NumericalError,
    StabilityGuardError,
    ValidationError,
)
from .gramians import (
    cross_gramians_for,
    gramians_for,
    gramians_freq_limited,
    gramians_time_limited,
)
from .matfun import freq_indicator, mat_exp
from .system import BilinearSystem, biorthonormalize, project

__all__ = [
    "IterationConfig",
    "ReductionOutcome",
    "balanced_truncation",
    "homora",
    "tlhmora",
    "flhmora",
    "flphmora",
    "tlphmora",
    "approx_products",
]

_CLIP_REL = 1e-12
_CANDIDATE_WINDOW = 50  # stable iterates kept for the non-convergence fallback


@dataclass(frozen=True)
class IterationConfig:
    tol: float = 1e-5
    max_iter: int = 200
    solve_mode: object = None  # None -> auto per problem size
    stability_guard: bool = True
    stagnation_tol: float = 5e-4  # on the limited-norm error; 0 disables

    def __post_init__(self):
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be >= 1")
        if self.stagnation_tol < 0:
            raise ValidationError("stagnation_tol must be >= 0")


@dataclass
class ReductionOutcome:
    rom: BilinearSystem
    iterations: int = 0
    converged: bool = True
    convergence_history: list = field(default_factory=list)
    hankel_values: np.ndarray = None
    optimality_residuals: object = None  # populated post-hoc by callers
    clip_floor: float = 0.0  # most negative gramian eigenvalue clipped (BT)
    guard_events: int = 0


def _psd_factor(M, what):
    """Symmetric square-root factor with negative-eigenvalue clipping."""
    lam, U = np.linalg.eigh(0.5 * (M + M.T))
    lam_max = max(lam[-1], 0.0)
    if lam_max == 0.0:
        raise NumericalError(f"{what} is non-positive; cannot factor")
    floor = min(lam[0], 0.0)
    if floor < -_CLIP_REL * lam_max and floor < -1e-8 * lam_max:
        # strongly indefinite gramians are surfaced, not clipped away
        raise NumericalError(
            f"{what} indefinite beyond clip tolerance (floor {floor:.3e}, "
            f"lam_max {lam_max:.3e})"
        )
    lam = np.clip(lam, 0.0, None)
    return U @ np.diag(np.sqrt(lam)), floor


def balanced_truncation(sys, r, kind="infinite", band=None, mode=None):
    """Square-root balanced truncation on the gramian pair of given kind."""
    if not 1 <= r <= sys.order:
        raise ValidationError(f"r must be in 1..{sys.order}, got {r}")
    g = gramians_for(sys, kind, band, mode)
    Z_P, floor_p = _psd_factor(g.P, "reachability gramian")
    Z_Q, floor_q = _psd_factor(g.Q, "observability gramian")
    U, sigma, Vt = np.linalg.svd(Z_Q.T @ Z_P)
    if sigma[r - 1] < 1e-12 * sigma[0]:
        raise ValidationError(
            f"requested order {r} exceeds the numerical rank of the "
            f"gramian product (sigma_{r} = {sigma[r - 1]:.3e})"
        )
    scale = 1.0 / np.sqrt(sigma[:r])
    V = Z_P @ Vt[:r].T @ np.diag(scale)
    W = Z_Q @ U[:, :r] @ np.diag(scale)
    return ReductionOutcome(
        rom=project(sys, V, W),
        iterations=0,
        converged=True,
        hankel_values=sigma[:r].copy(),
        clip_floor=min(floor_p, floor_q),
    )


def _modal_init(sys, r):
    """Galerkin projection onto the invariant subspace of the r slowest
    (largest real part) eigenvalues, via an ordered real Schur form.

    Unlike balanced truncation this needs no gramian rank, so it serves as
    the initial guess where the Hankel values decay below working precision.
    """
    import scipy.linalg as sla

    lam = np.linalg.eigvals(sys.A)
    cutoff = np.sort(lam.real)[::-1][r - 1]
    gap = 1e-8 * max(1.0, abs(cutoff))
    T, Z, sdim = sla.schur(
        sys.A, output="real", sort=lambda re, im: re >= cutoff - gap
    )
    if sdim < r:
        raise ValidationError(
            f"modal ordering selected only {sdim} of {r} requested modes"
        )
    # the leading r Schur columns are invariant unless the cut lands
    # inside a 2x2 block of a complex pair
    if r < sys.order and abs(T[r, r - 1]) > gap * max(1.0, abs(T[r - 1, r - 1])):
        raise ValidationError(
            f"modal cut at order {r} splits a complex conjugate pair; "
            "choose a different r"
        )
    V = Z[:, :r]
    return project(sys, V, V)


def _sorted_eigs(A):
    lam = np.linalg.eigvals(A)
    order = np.lexsort((lam.imag, lam.real))
    return lam[order]


def _eig_change(A_new, A_old):
    lam_new, lam_old = _sorted_eigs(A_new), _sorted_eigs(A_old)
    denom = np.linalg.norm(lam_new)
    return np.linalg.norm(lam_new - lam_old) / denom if denom > 0 else 0.0


def _reflect_unstable(A):
    """Mirror unstable eigenvalues across the imaginary axis."""
    lam, T = np.linalg.eig(A)
    lam = np.where(lam.real > 0, -lam.real + 1j * lam.imag, lam)
    A_ref = T @ np.diag(lam) @ np.linalg.inv(T)
    return A_ref.real


def _limited_sq_error(sys, rom, kind, band, mode, full_trace):
    """Squared limited-norm error via the three-term decomposition, reusing
    a precomputed trace(C P C^T) of the full system."""
    g_rom = gramians_for(rom, kind, band, mode)
    cross = cross_gramians_for(sys, rom, kind, band, mode)
    return (full_trace
            - 2.0 * np.trace(sys.C @ cross.Phat @ rom.C.T)
            + np.trace(rom.C @ g_rom.P @ rom.C.T))


def _fixed_point_iteration(sys, init, cfg, kind, band):
    """Shared Petrov-Galerkin fixed point: solve the cross Sylvester pair
    against the current guess, bi-orthonormalize, project, repeat.

    The iteration has no convergence guarantee; some instances settle into
    cycles instead of a fixed point. Two stopping measures run side by side:
    the relative change of the reduced drift spectrum (tol) and the relative
    change of the limited-norm error between consecutive stable iterates
    (stagnation_tol), the latter because the iteration heuristically descends
    that error and plateaus on it even when the drift keeps wandering. If
    neither triggers, the stable iterate with the smallest limited-norm error
    is returned with converged=False, so a heuristic run still yields a
    usable, deterministic ROM.
    """
    guess = init
    if not guess.is_hurwitz():
        raise ValidationError("initial reduced drift must be Hurwitz")
    history = []
    candidates = []
    errors = []
    guard_events = 0
    converged = False
    iterations = 0
    full_trace = None
    prev_error = None
    for iterations in range(1, cfg.max_iter + 1):
        cross = cross_gramians_for(sys, guess, kind, band, cfg.solve_mode)
        V, W = biorthonormalize(cross.Phat, cross.Qhat)
        candidate = project(sys, V, W)
        reflected = False
        if not candidate.is_hurwitz():
            if not cfg.stability_guard:
                raise NumericalError("iteration produced a non-Hurwitz iterate")
            guard_events += 1
            reflected = True
            candidate = BilinearSystem(
                A=_reflect_unstable(candidate.A),
                N=candidate.N, B=candidate.B, C=candidate.C,
            )
            if not candidate.is_hurwitz():
                raise StabilityGuardError(
                    "eigenvalue reflection failed to restore stability"
                )
        change = _eig_change(candidate.A, guess.A)
        history.append(change)
        guess = candidate
        if change < cfg.tol:
            converged = True
            break
        if reflected:
            # a reflection is an intervention, not a fixed-point step; the
            # error jump across it says nothing about stagnation
            prev_error = None
            continue
        candidates.append(candidate)
        errors.append(None)
        del candidates[:-_CANDIDATE_WINDOW]
        del errors[:-_CANDIDATE_WINDOW]
        if cfg.stagnation_tol > 0:
            if full_trace is None:
                g_full = gramians_for(sys, kind, band, cfg.solve_mode)
                full_trace = np.trace(sys.C @ g_full.P @ sys.C.T)
            sq = _limited_sq_error(sys, candidate, kind, band,
                                   cfg.solve_mode, full_trace)
            err = np.sqrt(max(sq, 0.0))
            errors[-1] = err
            if (prev_error is not None
                    and abs(err - prev_error) < cfg.stagnation_tol
                    * max(err, 1e-300)):
                converged = True
                break
            prev_error = err
    if not converged:
        if not candidates:
            raise StabilityGuardError(
                "iteration produced no stable un-reflected iterate"
            )
        if full_trace is None:
            g_full = gramians_for(sys, kind, band, cfg.solve_mode)
            full_trace = np.trace(sys.C @ g_full.P @ sys.C.T)
        scored = [
            (err if err is not None else np.sqrt(max(_limited_sq_error(
                sys, rom, kind, band, cfg.solve_mode, full_trace), 0.0)), i)
            for i, (rom, err) in enumerate(zip(candidates, errors))
        ]
        guess = candidates[min(scored)[1]]
    return ReductionOutcome(
        rom=guess,
        iterations=iterations,
        converged=converged,
        convergence_history=history,
        guard_events=guard_events,
    )


def homora(sys, r, init=None, cfg=None):
    """Bilinear H2 fixed-point iteration over the infinite horizon."""
    cfg = cfg or IterationConfig()
    if init is None:
        init = balanced_truncation(sys, r, "infinite", mode=cfg.solve_mode).rom
    if init.order != r:
        raise ValidationError(f"init order {init.order} != requested r {r}")
    return _fixed_point_iteration(sys, init, cfg, "infinite", None)


def tlhmora(sys, r, band, init=None, cfg=None):
    """Time-limited variant; with band [0, inf) the iteration operators
    coincide with the infinite-horizon ones."""
    if not isinstance(band, TimeBand):
        raise ValidationError("band must be a TimeBand")
    cfg = cfg or IterationConfig()
    if init is None:
        init = balanced_truncation(sys, r, "time", band, mode=cfg.solve_mode).rom
    if init.order != r:
        raise ValidationError(f"init order {init.order} != requested r {r}")
    return _fixed_point_iteration(sys, init, cfg, "time", band)


def flhmora(sys, r, band, init=None, cfg=None):
    """Frequency-limited variant driven by the indicator-weighted pair."""
    if not isinstance(band, FreqBand):
        raise ValidationError("band must be a FreqBand")
    cfg = cfg or IterationConfig()
    if init is None:
        init = balanced_truncation(sys, r, "freq", band, mode=cfg.solve_mode).rom
    if init.order != r:
        raise ValidationError(f"init order {init.order} != requested r {r}")
    return _fixed_point_iteration(sys, init, cfg, "freq", band)


def _pseudo_optimal(sys, base_rom, cfg, kind, band):
    """Alternate the input/output map updates with fixed reduced drift and
    bilinear terms until both maps stagnate.

    The reduced B solves the observability-side condition exactly; the
    reduced C the reachability-side one. Neither step moves A or N.
    """
    A_fix, N_fix = base_rom.A, base_rom.N
    if np.max(np.linalg.eigvals(A_fix).real) >= 0:
        raise StabilityGuardError(
            "pseudo-optimal stage rejects a non-Hurwitz reduced drift"
        )
    B_bar, C_bar = base_rom.B, base_rom.C
    gram_of = gramians_time_limited if kind == "time" else gramians_freq_limited
    history = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        guess = BilinearSystem(A=A_fix, N=N_fix, B=B_bar, C=C_bar)
        Q_bar = gram_of(guess, band, cfg.solve_mode).Q
        W = cross_gramians_for(sys, guess, kind, band, cfg.solve_mode).Qhat
        try:
            B_new = -np.linalg.solve(Q_bar, W.T @ sys.B)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"singular reduced observability gramian: {exc}"
            ) from exc
        guess = BilinearSystem(A=A_fix, N=N_fix, B=B_new, C=C_bar)
        P_bar = gram_of(guess, band, cfg.solve_mode).P
        V = cross_gramians_for(sys, guess, kind, band, cfg.solve_mode).Phat
        try:
            C_new = np.linalg.solve(P_bar.T, V.T @ sys.C.T).T
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"singular reduced reachability gramian: {exc}"
            ) from exc
        change = max(
            np.linalg.norm(B_new - B_bar) / max(np.linalg.norm(B_new), 1e-300),
            np.linalg.norm(C_new - C_bar) / max(np.linalg.norm(C_new), 1e-300),
        )
        history.append(change)
        B_bar, C_bar = B_new, C_new
        if change < cfg.tol:
            converged = True
            break
    return ReductionOutcome(
        rom=BilinearSystem(A=A_fix, N=N_fix, B=B_bar, C=C_bar),
        iterations=iterations,
        converged=converged,
        convergence_history=history,
    )


def flphmora(sys, r, band, cfg=None, init=None):
    """Frequency-limited pseudo-optimal reduction: run the fixed-point
    iteration, freeze its drift and bilinear maps, then enforce the
    input- and output-map optimality conditions exactly."""
    cfg = cfg or IterationConfig()
    base = init if init is not None else flhmora(sys, r, band, cfg=cfg).rom
    outcome = _pseudo_optimal(sys, base, cfg, "freq", band)
    return outcome


def tlphmora(sys, r, band, cfg=None, init=None):
    """Time-limited pseudo-optimal reduction (see flphmora)."""
    cfg = cfg or IterationConfig()
    base = init if init is not None else tlhmora(sys, r, band, cfg=cfg).rom
    outcome = _pseudo_optimal(sys, base, cfg, "time", band)
    return outcome


def approx_products(sys, r, tau, freq_band, init=None, cfg=None):
    """Subspace approximation of the six expensive matrix-function products.

    Runs the infinite-horizon fixed-point loop, orthonormalizing the two
    cross-gramian solutions into a reachability basis V and an observability
    basis W each sweep. Input-side products are projected through V, output-
    side ones through W, and the bilinear maps through both. The loop stops
    when the relative change of all six tracked products drops below
    cfg.tol. Returns a dict of the projected approximations plus the bases.

    The bases are kept orthonormal (Galerkin, not oblique): at orders past
    the numerical Hankel rank the oblique correction blows up, while the
    trailing orthonormal directions are merely uninformative.
    """
    cfg = cfg or IterationConfig()
    if not isinstance(freq_band, FreqBand):
        raise ValidationError("freq_band must be a FreqBand")
    if not np.isfinite(tau) or tau <= 0:
        raise ValidationError("tau must be finite and positive")
    guess = init
    if guess is None:
        guess = _modal_init(sys, r)
    if guess.order != r:
        raise ValidationError(f"init order {guess.order} != requested r {r}")

    def reduced_products(rom_v, rom_w, V, W):
        if not (rom_v.is_hurwitz() and rom_w.is_hurwitz()):
            raise NumericalError("reduced drift left the Hurwitz region")
        E_v = mat_exp(rom_v.A, tau)
        E_w = mat_exp(rom_w.A, tau)
        F_v = freq_indicator(rom_v.A, freq_band)
        F_w = freq_indicator(rom_w.A, freq_band)
        N_vw = tuple(V.T @ Nk @ W for Nk in sys.N)
        return (
            [E_v @ rom_v.B, E_w.T @ rom_w.C.T, F_v @ rom_v.B, F_w.T @ rom_w.C.T]
            + [E_v @ Nk for Nk in N_vw]
            + [F_v @ Nk for Nk in N_vw],
            (E_v, E_w, F_v, F_w, N_vw),
        )

    tracked = None
    pieces = None
    V = W = rom_v = rom_w = None
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        cross = cross_gramians_for(sys, guess, "infinite", None, cfg.solve_mode)
        V, _ = np.linalg.qr(cross.Phat)
        W, _ = np.linalg.qr(cross.Qhat)
        rom_v = project(sys, V, V)
        rom_w = project(sys, W, W)
        guess = rom_v
        new_tracked, pieces = reduced_products(rom_v, rom_w, V, W)
        if tracked is not None:
            change = max(
                np.linalg.norm(new_m - old_m) / max(np.linalg.norm(new_m), 1e-300)
                for new_m, old_m in zip(new_tracked, tracked)
            )
            if change < cfg.tol:
                tracked = new_tracked
                converged = True
                break
        tracked = new_tracked
    E_v, E_w, F_v, F_w, N_vw = pieces
    products = {
        "exp_B": V @ E_v @ rom_v.B,
        "expT_CT": W @ E_w.T @ rom_w.C.T,
        "exp_N": tuple(V @ E_v @ Nk @ W.T for Nk in N_vw),
        "freq_B": V @ F_v @ rom_v.B,
        "freqT_CT": W @ F_w.T @ rom_w.C.T,
        "freq_N": tuple(V @ F_v @ Nk @ W.T for Nk in N_vw),
    }
    return products, ReductionOutcome(
        rom=rom_v, iterations=iterations, converged=converged,
    ), V, W
