"""
    The smoothing limit S of powers of the renormalized Laplacian and the
    self-smoothing (idempotency) detector.

    An idempotent kernel F projects onto a fixed subspace: F X w stays in the
    image of F for any features X and weights w, whose dimension is
    trace(F) = rank(F).
"""
from __future__ import annotations
from dataclasses import dataclass, asdict

import numpy as np

from .. import _config
from ..dtypes import Graph
from ..math import check_square, eigvalsh, idempotency_defect, numeric_rank, trace


def kernel_smoothing_limit(g: Graph) -> np.ndarray:
    """
    lim_k L^k. Within a connected component c: S_ij = sqrt(d_i d_j) / sum_{v in c} d_v,
    degrees counted with self-loops. Zero across components.
    """
    d = g.degrees(with_self_loops=True).d
    comp = g.component_labels()
    sq = np.sqrt(d)

    totals = np.bincount(comp, weights=d)
    same = comp[:, None] == comp[None, :]

    return np.where(same, np.outer(sq, sq) / totals[comp][:, None], 0.0)


@dataclass(frozen=True)
class SelfSmoothingReport:
    idempotency_defect: float
    trace: float
    rank: int
    subspace_dim: int
    verdict: bool
    tol: float

    def to_dict(self) -> dict:
        return asdict(self)


def detect_self_smoothing(M: np.ndarray, tol: float = None) -> SelfSmoothingReport:
    """
    Idempotency test. Default tol is 1e-8 * n.
    subspace_dim is the dimension of the image of M: the rounded trace when M is
    idempotent, its numeric rank otherwise.
    """
    M = check_square(M)
    n = M.shape[0]
    if tol is None:
        tol = _config.get("idempotency_tol_factor") * n

    defect = idempotency_defect(M)
    tr = trace(M)
    rk = numeric_rank(M)
    verdict = defect <= tol

    return SelfSmoothingReport(
        idempotency_defect=defect,
        trace=tr,
        rank=rk,
        subspace_dim=int(round(tr)) if verdict else rk,
        verdict=bool(verdict),
        tol=float(tol),
    )


@dataclass(frozen=True)
class SpectralProfile:
    n: int
    zeros: int
    ones: int
    min_eigenvalue: float
    max_eigenvalue: float

    def to_dict(self) -> dict:
        return asdict(self)


def spectral_profile(M: np.ndarray, tol: float = 1e-6) -> SpectralProfile:
    """
    Count kernel eigenvalues at 0 (directions the kernel erases) and at 1
    (directions it keeps untouched). Many zeros mean the kernel is close to self-smoothing.
    """
    w = eigvalsh(M)
    return SpectralProfile(
        n=len(w),
        zeros=int(np.sum(np.abs(w) <= tol)),
        ones=int(np.sum(np.abs(w - 1.0) <= tol)),
        min_eigenvalue=float(w[0]),
        max_eigenvalue=float(w[-1]),
    )
