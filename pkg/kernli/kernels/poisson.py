"""
    Poisson kernel P = (1 - r^2) ((r^2 + 1) I - 2rL)^(-1) and its scalar map.
"""
import numpy as np

from ..errors import KernelSpecError
from ..math import check_square, solve_spd


def _resolvent_matrix(L: np.ndarray, r: float) -> np.ndarray:
    if not abs(r) < 1.0:
        raise KernelSpecError(f"Radius r must satisfy |r| < 1, got {r}", token="r")
    L = check_square(L)
    return (r * r + 1.0) * np.eye(L.shape[0]) - 2.0 * r * L


def kernel_poisson(L: np.ndarray, r: float) -> np.ndarray:
    """
    For |r| < 1 and spectrum of L in [-1, 1] the system matrix has eigenvalues
    >= (1 - |r|)^2 > 0, so the Cholesky solve always succeeds.
    """
    M = _resolvent_matrix(L, r)
    P = (1.0 - r * r) * solve_spd(M, np.eye(M.shape[0]))
    return 0.5 * (P + P.T)


def cheb_series_closed_form(L: np.ndarray, r: float) -> np.ndarray:
    """
    ((r^2 + 1) I - 2rL)^(-1) (I - rL) = sum_{k>=0} r^k T_k(L).
    Relation to the Poisson kernel: P = 2 * this - I.
    """
    M = _resolvent_matrix(L, r)
    X = solve_spd(M, np.eye(M.shape[0]) - r * L)
    return 0.5 * (X + X.T)


def eigenvalue_map_poisson(lam, r: float):
    """
    (1 - r^2) / (1 - 2 r lam + r^2). Maps [-1, 1] onto [(1-|r|)/(1+|r|), (1+|r|)/(1-|r|)].
    Accepts scalars or arrays.
    """
    if not abs(r) < 1.0:
        raise KernelSpecError(f"Radius r must satisfy |r| < 1, got {r}", token="r")
    lam = np.asarray(lam, dtype=np.float64)
    out = (1.0 - r * r) / (1.0 - 2.0 * r * lam + r * r)
    return float(out) if out.ndim == 0 else out
