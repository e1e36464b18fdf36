"""System norms: H2 and its time- and frequency-limited variants, error
norms of full/ROM pairs, and an independent kernel-quadrature oracle."""

import numpy as np

from .bands import TimeBand
from .exceptions import ConsistencyError, ValidationError
from .gramians import cross_gramians_for, gramians_for
from .matfun import mat_exp
from .system import error_system

__all__ = [
    "h2_norm",
    "h2_time_limited",
    "h2_freq_limited",
    "error_norm",
    "volterra_quadrature_oracle",
]


def _sqrt_trace(value, what):
    # tiny negative traces are roundoff of an exactly-zero norm
    if value < 0:
        if value < -1e-10 * max(abs(value), 1.0):
            raise ValidationError(f"{what} trace came out negative: {value:.3e}")
        value = 0.0
    return float(np.sqrt(value))


def _norm_of(sys, kind, band, mode):
    g = gramians_for(sys, kind, band, mode)
    via_p = np.trace(sys.C @ g.P @ sys.C.T)
    return _sqrt_trace(via_p, f"{kind} gramian")


def h2_norm(sys, mode=None):
    """sqrt(trace(C P C^T)) with the infinite-horizon gramian."""
    return _norm_of(sys, "infinite", None, mode)


def h2_time_limited(sys, band, mode=None):
    return _norm_of(sys, "time", band, mode)


def h2_freq_limited(sys, band, mode=None):
    return _norm_of(sys, "freq", band, mode)


def error_norm(full, rom, kind="infinite", band=None, mode=None,
               cross_check=True, check_tol=1e-8):
    """Norm of the difference system in the requested kind.

    Computes the three-term trace decomposition
    trace(C P C^T - 2 C Phat Cr^T + Cr Pr Cr^T) and, unless disabled, the
    monolithic route through the gramian of the assembled error system;
    disagreement beyond tolerance raises.
    """
    g_full = gramians_for(full, kind, band, mode)
    g_rom = gramians_for(rom, kind, band, mode)
    cross = cross_gramians_for(full, rom, kind, band, mode)
    C, Cr = full.C, rom.C
    sq = (np.trace(C @ g_full.P @ C.T)
          - 2.0 * np.trace(C @ cross.Phat @ Cr.T)
          + np.trace(Cr @ g_rom.P @ Cr.T))
    value = _sqrt_trace(sq, "error-system")
    if cross_check:
        err_sys = error_system(full, rom)
        g_err = gramians_for(err_sys, kind, band, mode)
        C_e = err_sys.C
        mono_sq = np.trace(C_e @ g_err.P @ C_e.T)
        mono = _sqrt_trace(mono_sq, "monolithic error")
        # compare the squared norms: the sqrt amplifies roundoff without
        # bound as the error approaches zero, the squares do not
        scale = max(abs(sq), abs(mono_sq),
                    abs(np.trace(C @ g_full.P @ C.T)), 1e-12)
        if abs(sq - mono_sq) > check_tol * scale:
            raise ConsistencyError(
                "error-norm routes disagree: decomposition "
                f"{value:.12e} vs monolithic {mono:.12e}"
            )
    return value


def _gauss_legendre(lo, hi, nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def volterra_quadrature_oracle(sys, band, max_level=2, nodes_per_dim=64,
                               cost_cap=2 * 10**6):
    """Ground-truth time-limited norm by direct tensor quadrature of the
    kernel integrals, truncated at max_level nested kernels.

    Never touches the gramian path; intended for small systems only. Cost
    grows as nodes_per_dim**max_level.
    """
    if not isinstance(band, TimeBand) or band.is_infinite:
        raise ValidationError("oracle requires a finite TimeBand")
    if not band.starts_at_zero:
        raise ValidationError("oracle is defined for [0, tau] windows")
    if max_level < 1 or max_level > 3:
        raise ValidationError("max_level must be in 1..3")
    if nodes_per_dim ** max_level > cost_cap:
        raise ValidationError(
            f"cost cap exceeded: {nodes_per_dim}^{max_level} > {cost_cap}"
        )
    t_nodes, t_weights = _gauss_legendre(0.0, band.hi, nodes_per_dim)
    exps = [mat_exp(sys.A, t) for t in t_nodes]
    C = sys.C

    # level-i kernel factors K_i(t_1..t_i) built by the recursion
    # K_1 = e^(A t_1) B,  K_i = e^(A t_i) [N_1 K_{i-1}, ..., N_m K_{i-1}];
    # the squared norm contribution is the weighted trace of (C K_i)(C K_i)^T.
    total = 0.0
    factors = [(exps[j] @ sys.B, t_weights[j]) for j in range(nodes_per_dim)]
    for level in range(1, max_level + 1):
        if level > 1:
            new_factors = []
            for K_prev, w_prev in factors:
                stacked = np.hstack([Nk @ K_prev for Nk in sys.N])
                for j in range(nodes_per_dim):
                    new_factors.append((exps[j] @ stacked, w_prev * t_weights[j]))
            factors = new_factors
        level_sum = 0.0
        for K, w in factors:
            CK = C @ K
            level_sum += w * np.sum(CK * CK)
        total += level_sum
        if sum(np.linalg.norm(Nk) for Nk in sys.N) == 0.0:
            break  # higher kernels vanish identically for linear systems
    return float(np.sqrt(total))
