"""
    Dense symmetric linear algebra used throughout the package.

    Everything here is a pure function of its inputs. Eigenvector signs are not
    canonicalized; compare products such as U f(L) U^T, never raw vectors.
"""
from __future__ import annotations
from typing import Callable

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from . import _config
from .errors import NumericsError, NotPositiveDefiniteError


class Spectrum:
    """
    Eigendecomposition of a symmetric operator:
    ascending eigenvalues, eigenvector k in column k.
    """

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        self.eigenvectors = np.asarray(eigenvectors, dtype=np.float64)
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    def __len__(self):
        return self.eigenvalues.shape[0]

    def __repr__(self):
        return f"Spectrum(n={len(self)}, range=[{self.eigenvalues[0]:.4g}, {self.eigenvalues[-1]:.4g}])"

    def reconstruct(self) -> np.ndarray:
        return apply_spectral_function(self, lambda x: x)

    def apply(self, f: Callable[[float], float]) -> np.ndarray:
        return apply_spectral_function(self, f)


def asymmetry(M: np.ndarray) -> float:
    """max |M - M^T|"""
    return float(np.max(np.abs(M - M.T))) if M.size else 0.0


def check_square(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NumericsError(f"Expected a square matrix, got shape {M.shape}")
    return M


def check_symmetric(M: np.ndarray, tol: float = None) -> np.ndarray:
    """
    Returns M as a float array; raises if max |M - M^T| exceeds tol
    """
    M = check_square(M)
    tol = _config.get("symmetry_tol") if tol is None else tol
    a = asymmetry(M)
    if a > tol:
        raise NumericsError(f"Matrix is not symmetric (max asymmetry {a:.3e})", asymmetry=a)
    return M


def eigh(M: np.ndarray, tol: float = None) -> Spectrum:
    """
    Eigendecomposition of a symmetric matrix (LAPACK syevd via numpy)
    """
    M = check_symmetric(M, tol)
    w, U = np.linalg.eigh(0.5 * (M + M.T))
    return Spectrum(w, U)


def eigvalsh(M: np.ndarray, tol: float = None) -> np.ndarray:
    M = check_symmetric(M, tol)
    return np.linalg.eigvalsh(0.5 * (M + M.T))


def solve_spd(M: np.ndarray, B: np.ndarray) -> np.ndarray:
    """
    Solve M X = B for symmetric positive definite M by Cholesky factorization.
    B may be a vector or an (n, m) matrix.
    """
    M = check_symmetric(M)
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != M.shape[0]:
        raise NumericsError(f"Right-hand side has {B.shape[0]} rows, matrix has {M.shape[0]}")

    c, info = lapack.dpotrf(M, lower=False, clean=True)
    if info > 0:
        raise NotPositiveDefiniteError(pivot=info - 1)
    if info < 0:
        raise NumericsError(f"dpotrf: illegal value in argument {-info}")

    return scipy.linalg.cho_solve((c, False), B)


def matrix_power(M: np.ndarray, k: int) -> np.ndarray:
    """
    M^k by repeated squaring; M^0 = I
    """
    M = check_square(M)
    if int(k) != k or k < 0:
        raise NumericsError(f"Power must be a non-negative integer, got {k}")
    return np.linalg.matrix_power(M, int(k))


def idempotency_defect(M: np.ndarray) -> float:
    """max |M^2 - M|; zero exactly for projections"""
    M = check_square(M)
    return float(np.max(np.abs(M @ M - M))) if M.size else 0.0


def default_rank_tol(values: np.ndarray, n: int) -> float:
    top = float(np.max(np.abs(values))) if values.size else 0.0
    return 1e-8 * n * top


def numeric_rank(M: np.ndarray, tol: float = None) -> int:
    """
    Number of eigenvalues (singular values for non-symmetric or rectangular M)
    above tol. Default tol is 1e-8 * n * spectral radius.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise NumericsError(f"Expected a matrix, got shape {M.shape}")
    if M.size == 0:
        return 0

    if M.shape[0] == M.shape[1] and asymmetry(M) <= _config.get("symmetry_tol"):
        values = np.abs(np.linalg.eigvalsh(0.5 * (M + M.T)))
    else:
        values = np.linalg.svd(M, compute_uv=False)

    if tol is None:
        tol = default_rank_tol(values, max(M.shape))

    return int(np.sum(values > tol))


def trace(M: np.ndarray) -> float:
    return float(np.trace(check_square(M)))


def apply_spectral_function(s: Spectrum, f: Callable[[float], float]) -> np.ndarray:
    """
    U diag(f(lambda_i)) U^T
    """
    fl = np.vectorize(f, otypes=[np.float64])(s.eigenvalues)
    U = s.eigenvectors
    return (U * fl[None, :]) @ U.T
