"""Shared fixtures and factories for the test suite."""

import numpy as np
import pytest

from bimor import BilinearSystem, FixedPoint, illustrative_7


def make_stable(rng, n, m=1, p=1, n_scale=0.1):
    """Random Hurwitz bilinear system with ||N_k|| <= n_scale * ||A||."""
    M = rng.standard_normal((n, n))
    shift = np.max(np.linalg.eigvals(M).real) + 1.0
    A = M - shift * np.eye(n)
    N = []
    for _ in range(m):
        Nk = rng.standard_normal((n, n))
        Nk *= n_scale * np.linalg.norm(A) / np.linalg.norm(Nk)
        N.append(Nk)
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((p, n))
    return BilinearSystem(A=A, N=tuple(N), B=B, C=C)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


@pytest.fixture(scope="session")
def sys7():
    return illustrative_7()


@pytest.fixture
def fp3():
    return FixedPoint(max_sweeps=3)
