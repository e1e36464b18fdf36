"""Generalized Lyapunov/Sylvester solver engine."""

import numpy as np
import pytest

from bimor import (
    Direct,
    FixedPoint,
    GeneralizedLyapunovProblem,
    SolverError,
    ValidationError,
    solve_generalized,
    solve_sylvester,
)
from bimor.solvers import default_mode
from conftest import make_stable


class TestSolveSylvester:
    def test_scalar(self):
        X = solve_sylvester(np.array([[-1.0]]), np.array([[-1.0]]),
                            np.array([[2.0]]))
        assert np.isclose(X[0, 0], 1.0)

    def test_diagonal(self):
        A = np.diag([-1.0, -3.0])
        B = np.diag([-2.0, -5.0])
        RHS = np.array([[1.0, 2.0], [3.0, 4.0]])
        X = solve_sylvester(A, B, RHS)
        a, b = np.diag(A), np.diag(B)
        expected = -RHS / (a[:, None] + b[None, :])
        assert np.allclose(X, expected)

    def test_residual(self, rng):
        A = make_stable(rng, 5).A
        B = make_stable(rng, 3).A
        RHS = rng.standard_normal((5, 3))
        X = solve_sylvester(A, B, RHS)
        res = np.linalg.norm(A @ X + X @ B + RHS)
        bound = 1e-10 * (np.linalg.norm(A) + np.linalg.norm(B)) \
            * np.linalg.norm(X) + 1e-12
        assert res <= bound

    def test_overlapping_spectra(self):
        with pytest.raises(SolverError):
            solve_sylvester(np.array([[1.0]]), np.array([[-1.0]]),
                            np.array([[1.0]]))

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            solve_sylvester(np.eye(2), np.eye(3), np.eye(4))


class TestProblemValidation:
    def test_non_square_drift(self):
        with pytest.raises(ValidationError):
            GeneralizedLyapunovProblem(
                left_drift=np.ones((2, 3)), right_drift=np.eye(2),
                product_terms=(), constant=np.eye(2))

    def test_constant_shape(self):
        with pytest.raises(ValidationError):
            GeneralizedLyapunovProblem(
                left_drift=np.eye(2), right_drift=np.eye(3),
                product_terms=(), constant=np.eye(2))

    def test_bad_sign(self):
        with pytest.raises(ValidationError):
            GeneralizedLyapunovProblem(
                left_drift=-np.eye(2), right_drift=-np.eye(2),
                product_terms=((np.eye(2), np.eye(2), 2),),
                constant=np.eye(2))

    def test_term_shape(self):
        with pytest.raises(ValidationError):
            GeneralizedLyapunovProblem(
                left_drift=-np.eye(2), right_drift=-np.eye(2),
                product_terms=((np.eye(3), np.eye(2), +1),),
                constant=np.eye(2))


class TestSolveGeneralized:
    def test_scalar_bilinear(self):
        # a p + p a + n p n + b^2 = 0 with a=-2, n=1, b^2=3 -> p = 1
        problem = GeneralizedLyapunovProblem(
            left_drift=np.array([[-2.0]]), right_drift=np.array([[-2.0]]),
            product_terms=((np.array([[1.0]]), np.array([[1.0]]), +1),),
            constant=np.array([[3.0]]))
        assert np.isclose(solve_generalized(problem, Direct())[0, 0], 1.0)

    def test_no_terms_reduces_to_sylvester(self, rng):
        A = make_stable(rng, 4).A
        B = make_stable(rng, 4).A
        K = rng.standard_normal((4, 4))
        problem = GeneralizedLyapunovProblem(
            left_drift=A, right_drift=B, product_terms=(), constant=K)
        assert np.allclose(solve_generalized(problem, Direct()),
                           solve_sylvester(A, B.T, K))

    def test_fixed_point_converges_to_direct(self, rng):
        sys = make_stable(rng, 3, n_scale=0.05)
        problem = GeneralizedLyapunovProblem(
            left_drift=sys.A, right_drift=sys.A,
            product_terms=tuple((Nk, Nk, +1) for Nk in sys.N),
            constant=sys.B @ sys.B.T)
        exact = solve_generalized(problem, Direct())
        iterated = solve_generalized(problem, FixedPoint(max_sweeps=50))
        assert np.linalg.norm(iterated - exact) <= 1e-8 * np.linalg.norm(exact)

    def test_sweeps_match_explicit_recursion(self, rng):
        # sweep k = drift solve of constant folded with the sweep-(k-1) iterate
        sys = make_stable(rng, 3, n_scale=0.2)
        A, N, K = sys.A, sys.N[0], sys.B @ sys.B.T
        problem = GeneralizedLyapunovProblem(
            left_drift=A, right_drift=A,
            product_terms=((N, N, +1),), constant=K)
        X = solve_sylvester(A, A.T, K)
        for sweeps in (1, 2, 3):
            X = solve_sylvester(A, A.T, K + N @ X @ N.T)
            got = solve_generalized(problem, FixedPoint(max_sweeps=sweeps))
            assert np.allclose(got, X)

    def test_symmetry_preserved(self, rng):
        sys = make_stable(rng, 4, n_scale=0.1)
        problem = GeneralizedLyapunovProblem(
            left_drift=sys.A, right_drift=sys.A,
            product_terms=tuple((Nk, Nk, +1) for Nk in sys.N),
            constant=sys.B @ sys.B.T)
        for mode in (Direct(), FixedPoint(max_sweeps=3)):
            X = solve_generalized(problem, mode)
            assert np.linalg.norm(X - X.T) <= 1e-12 * np.linalg.norm(X)

    def test_direct_residual(self, rng):
        sys = make_stable(rng, 4, n_scale=0.1)
        problem = GeneralizedLyapunovProblem(
            left_drift=sys.A, right_drift=sys.A,
            product_terms=tuple((Nk, Nk, +1) for Nk in sys.N),
            constant=sys.B @ sys.B.T)
        X = solve_generalized(problem, Direct())
        res = sys.A @ X + X @ sys.A.T + sys.B @ sys.B.T
        for Nk in sys.N:
            res += Nk @ X @ Nk.T
        assert np.linalg.norm(res) <= 1e-10 * max(np.linalg.norm(X), 1.0)

    def test_size_cap(self):
        problem = GeneralizedLyapunovProblem(
            left_drift=-np.eye(3), right_drift=-np.eye(3),
            product_terms=(), constant=np.eye(3))
        with pytest.raises(SolverError):
            solve_generalized(problem, Direct(size_cap=4))

    def test_reported_relative_change(self, rng):
        sys = make_stable(rng, 3, n_scale=0.1)
        mode = FixedPoint(max_sweeps=4)
        problem = GeneralizedLyapunovProblem(
            left_drift=sys.A, right_drift=sys.A,
            product_terms=tuple((Nk, Nk, +1) for Nk in sys.N),
            constant=sys.B @ sys.B.T)
        solve_generalized(problem, mode)
        assert len(mode.last_relative_change) == 4
        assert all(c >= 0 for c in mode.last_relative_change)

    def test_unknown_mode(self):
        problem = GeneralizedLyapunovProblem(
            left_drift=-np.eye(2), right_drift=-np.eye(2),
            product_terms=(), constant=np.eye(2))
        with pytest.raises(ValidationError):
            solve_generalized(problem, "fast")


class TestDefaults:
    def test_default_mode_threshold(self):
        assert isinstance(default_mode(60, 60), Direct)
        assert isinstance(default_mode(61, 2), FixedPoint)
        assert default_mode(100, 2).max_sweeps == 3

    def test_fixed_point_validation(self):
        with pytest.raises(ValidationError):
            FixedPoint(max_sweeps=0)
