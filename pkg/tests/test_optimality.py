"""Gradients, optimality-condition residuals, and the trace identity."""

import numpy as np
import pytest

from bimor import (
    Direct,
    FreqBand,
    TimeBand,
    ValidationError,
    gradient_h2tau,
    gramians_time_limited,
    lemma1_check,
    residuals_freq,
    residuals_time,
)
from bimor.gramians import cross_gramians_time
from conftest import make_stable


def _sq_error(full, rom, band):
    """Squared time-limited error via the three-term trace decomposition."""
    mode = Direct()
    P = gramians_time_limited(full, band, mode).P
    P_r = gramians_time_limited(rom, band, mode).P
    Phat = cross_gramians_time(full, rom, band, mode).Phat
    return (np.trace(full.C @ P @ full.C.T)
            - 2.0 * np.trace(full.C @ Phat @ rom.C.T)
            + np.trace(rom.C @ P_r @ rom.C.T))


class TestGradient:
    def test_matches_finite_differences(self, rng):
        from bimor import BilinearSystem

        full = make_stable(rng, 4, n_scale=0.1)
        rom = make_stable(rng, 2, n_scale=0.1)
        band = TimeBand(0.0, 1.2)
        grad = gradient_h2tau(full, rom, band, Direct())
        h = 1e-6

        # dA block
        fd = np.zeros_like(rom.A)
        for i in range(2):
            for j in range(2):
                for s, sign in ((h, +1.0), (-h, -1.0)):
                    Ap = rom.A.copy()
                    Ap[i, j] += s
                    pert = BilinearSystem(A=Ap, N=rom.N, B=rom.B, C=rom.C)
                    fd[i, j] += sign * _sq_error(full, pert, band)
        fd /= 2.0 * h
        assert np.linalg.norm(fd - grad.dA) <= 1e-5 * np.linalg.norm(grad.dA)

    def test_infinite_band_drops_exponential_terms(self, rng):
        full = make_stable(rng, 4, n_scale=0.1)
        rom = make_stable(rng, 2, n_scale=0.1)
        grad = gradient_h2tau(full, rom, TimeBand(0.0, np.inf), Direct())
        assert np.allclose(grad.Y_tau, 0.0)
        assert all(np.allclose(Z, 0.0) for Z in grad.Z_tau)

    def test_generic_window_rejected(self, rng):
        full = make_stable(rng, 4, n_scale=0.1)
        rom = make_stable(rng, 2, n_scale=0.1)
        with pytest.raises(ValidationError):
            gradient_h2tau(full, rom, TimeBand(0.5, 1.5), Direct())


class TestResiduals:
    def test_time_report_fields(self, sys7, fp3, rng):
        rom = make_stable(rng, 3, n_scale=0.1)
        report = residuals_time(sys7, rom, TimeBand(0.0, 0.5), fp3)
        assert report.mat_B.shape == (3, 1)
        assert report.mat_C.shape == (1, 3)
        assert all(v >= 0 for v in
                   (report.cond_A, report.cond_N, report.cond_B,
                    report.cond_C))
        norm = report.normalized()
        assert np.isclose(norm[2], report.cond_B / report.scale)

    def test_freq_band_type_checked(self, sys7, rng):
        rom = make_stable(rng, 2, n_scale=0.1)
        with pytest.raises(ValidationError):
            residuals_freq(sys7, rom, TimeBand(0.0, 1.0))

    def test_exact_rom_zero_residuals_linear(self, rng):
        # rom = full in the linear case satisfies all conditions trivially
        sys = make_stable(rng, 3, n_scale=0.0)
        report = residuals_time(sys, sys, TimeBand(0.0, 1.0), Direct())
        assert report.cond_B <= 1e-9 * report.scale
        assert report.cond_C <= 1e-9 * report.scale


class TestLemma1:
    def test_identity_random(self, rng):
        full = make_stable(rng, 4, n_scale=0.1)
        rom = make_stable(rng, 2, n_scale=0.1)
        O1 = rng.standard_normal((4, 2))
        O2 = rng.standard_normal((2, 4))
        t1, t2 = lemma1_check(full.A, rom.A, full.N, rom.N, 1.3, O1, O2,
                              Direct())
        scale = max(abs(t1), abs(t2), 1.0)
        assert abs(t1 - t2) <= 1e-10 * scale

    def test_identity_infinite_horizon(self, rng):
        full = make_stable(rng, 3, n_scale=0.1)
        rom = make_stable(rng, 2, n_scale=0.1)
        O1 = rng.standard_normal((3, 2))
        O2 = rng.standard_normal((2, 3))
        t1, t2 = lemma1_check(full.A, rom.A, full.N, rom.N, np.inf, O1, O2,
                              Direct())
        assert abs(t1 - t2) <= 1e-10 * max(abs(t1), abs(t2), 1.0)
