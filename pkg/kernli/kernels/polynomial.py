"""
    Kernels that are polynomials in the renormalized Laplacian, including the
    Chebyshev partial sums. Nothing here uses an eigendecomposition.
"""
from typing import Sequence

import numpy as np

from ..dtypes import Graph
from ..errors import KernelSpecError
from ..math import check_square, matrix_power


def kernel_power(L: np.ndarray, k: int) -> np.ndarray:
    """L^k, k >= 1"""
    if int(k) != k or k < 1:
        raise KernelSpecError(f"Power must be a positive integer, got {k}", token="k")
    return matrix_power(L, k)


def kernel_linear(L: np.ndarray) -> np.ndarray:
    """
    Linear eigenvalue map (I + L) / 2: sends (-1, 1] into (0, 1]
    """
    L = check_square(L)
    return 0.5 * (np.eye(L.shape[0]) + L)


def kernel_first_order(g: Graph) -> np.ndarray:
    """
    First-order Chebyshev kernel before renormalization: I + D^(-1/2) A D^(-1/2) = 2I - L.
    Requires every node to have a neighbor.
    """
    return 2.0 * np.eye(g.n) - g.laplacian_sym()


def chebyshev_sum(M: np.ndarray, coeffs: Sequence[float]) -> np.ndarray:
    """
    sum_k coeffs[k] T_k(M) with the three-term recurrence
    T_0 = I, T_1 = M, T_{k+2} = 2 M T_{k+1} - T_k
    """
    M = check_square(M)
    n = M.shape[0]

    t_prev = np.eye(n)
    total = coeffs[0] * t_prev if len(coeffs) else np.zeros((n, n))
    if len(coeffs) < 2:
        return total

    t_cur = M.copy()
    total = total + coeffs[1] * t_cur

    for c in coeffs[2:]:
        t_prev, t_cur = t_cur, 2.0 * M @ t_cur - t_prev
        total += c * t_cur

    return total


def _check_radius(r: float):
    if not abs(r) < 1.0:
        raise KernelSpecError(f"Radius r must satisfy |r| < 1, got {r}", token="r")


def _check_order(K: int):
    if int(K) != K or K < 0:
        raise KernelSpecError(f"Truncation order must be a non-negative integer, got {K}", token="K")


def cheb_partial(L: np.ndarray, r: float, K: int) -> np.ndarray:
    """
    I + 2 * sum_{k=1..K} r^k T_k(L), the truncated Chebyshev series of the Poisson kernel.
    The gap to the full series is at most 2|r|^(K+1) / (1 - |r|) in spectral norm.
    """
    _check_radius(r)
    _check_order(K)
    coeffs = [1.0] + [2.0 * r**k for k in range(1, int(K) + 1)]
    return chebyshev_sum(L, coeffs)


def cheb_series_partial(L: np.ndarray, r: float, K: int) -> np.ndarray:
    """
    sum_{k=0..K} r^k T_k(L), whose limit is ((r^2+1)I - 2rL)^(-1) (I - rL)
    """
    _check_radius(r)
    _check_order(K)
    return chebyshev_sum(L, [r**k for k in range(int(K) + 1)])
