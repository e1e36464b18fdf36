"""Built-in benchmark systems: a 7th-order single-input single-output
bilinear model with dense drift, and a boundary-controlled heat-transfer
generator on a square grid."""

import numpy as np

from .exceptions import ValidationError
from .system import BilinearSystem

__all__ = ["illustrative_7", "heat_transfer"]

_A7 = np.array([
    [-0.81, 0.47, -0.43, 1.6, 0.26, -0.4, 0.92],
    [-0.61, -1.9, 0.8, -1.6, 2.0, 0.98, -0.9],
    [0.5, -1.2, -2.1, -1.6, -1.1, 0.14, -0.87],
    [-1.3, 2.1, 0.47, -1.2, 3.7, -1.2, -1.3],
    [-0.24, -0.081, 1.6, -3.6, -1.3, 1.7, -2.6],
    [1.3, -0.96, -1.3, -0.57, -2.4, -2.4, -0.36],
    [-0.16, 1.5, -0.99, 1.5, 0.61, -2.2, -3.3],
])
_B7 = np.array([[0.0], [0.0], [-0.196], [1.42], [0.292], [0.198], [1.59]])
_C7 = np.array([[-0.804, 0.0, 0.835, -0.244, 0.216, -1.17, -1.15]])


def illustrative_7():
    """The 7x7 single-input single-output model with N = -I."""
    return BilinearSystem(A=_A7.copy(), N=(-np.eye(7),), B=_B7.copy(),
                          C=_C7.copy())


def heat_transfer(grid_k):
    """Boundary-controlled 2-D heat model on a grid_k x grid_k interior grid.

    Five-point Dirichlet Laplacian drift scaled by (grid_k + 1)^2; the input
    acts through a Robin-type term on one edge, contributing both a bilinear
    diagonal on that edge's nodes and a constant input vector. The output
    averages the state.

    Parameters
    ----------
    grid_k : int
        Interior grid points per side; state dimension is grid_k**2.

    Returns
    -------
    BilinearSystem
        Single-input single-output system of order grid_k**2.
    """
    if grid_k < 2:
        raise ValidationError(f"grid_k must be >= 2, got {grid_k}")
    k = int(grid_k)
    n = k * k
    h_inv = float(k + 1)
    # 1-D second-difference matrix, then the 2-D Laplacian via Kronecker sums
    T = (np.diag(-2.0 * np.ones(k)) + np.diag(np.ones(k - 1), 1)
         + np.diag(np.ones(k - 1), -1))
    eye = np.eye(k)
    A = h_inv**2 * (np.kron(eye, T) + np.kron(T, eye))
    # control acts on the bottom edge (first grid row)
    edge = np.zeros(n)
    edge[:k] = 1.0
    N = -h_inv * np.diag(edge)
    B = (h_inv * edge).reshape(n, 1)
    C = np.full((1, n), 1.0 / n)
    return BilinearSystem(A=A, N=(N,), B=B, C=C)
