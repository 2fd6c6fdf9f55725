"""
    Expected adjacency of a two-block stochastic block model and the closed-form
    spectrum of its renormalized Laplacian.
"""
from typing import List, Tuple

import numpy as np

from ..dtypes import normalize_adjacency
from ..errors import ConfigError


def _check_blocks(n1: int, n2: int, p: float, q: float, open_zero: bool):
    if int(n1) != n1 or int(n2) != n2 or n1 < 1 or n2 < 1:
        raise ConfigError(f"Block sizes must be positive integers, got ({n1}, {n2})")
    lo_ok = (lambda x: x > 0.0) if open_zero else (lambda x: x >= 0.0)
    for name, x in (("p", p), ("q", q)):
        if not (lo_ok(x) and x <= 1.0):
            interval = "(0, 1]" if open_zero else "[0, 1]"
            raise ConfigError(f"Probability {name} = {x} outside {interval}")


def expected_adjacency(n1: int, n2: int, p: float, q: float) -> np.ndarray:
    """
    E[A + I]: ones on the diagonal, p inside a block, q across blocks
    """
    _check_blocks(n1, n2, p, q, open_zero=False)
    n = n1 + n2
    block = np.repeat([0, 1], [n1, n2])
    E = np.where(block[:, None] == block[None, :], p, q).astype(np.float64)
    E[np.diag_indices(n)] = 1.0
    return E


def expected_laplacian_hat(n1: int, n2: int, p: float, q: float) -> np.ndarray:
    return normalize_adjacency(expected_adjacency(n1, n2, p, q))


def smallgap_spectrum_closed_form(
    n1: int, n2: int, p: float, q: float, merge_tol: float = 1e-12
) -> List[Tuple[float, int]]:
    """
    Eigenvalues with multiplicities, ascending, of the expected renormalized Laplacian:

        (1 - p) / d1              x (n1 - 1)
        (1 - p) / d2              x (n2 - 1)
        1 - (n2/d1 + n1/d2) q     x 1
        1                         x 1

    with d1 = 1 + (n1 - 1) p + n2 q and d2 = 1 + (n2 - 1) p + n1 q.
    Values closer than merge_tol are merged; zero multiplicities are dropped.
    """
    _check_blocks(n1, n2, p, q, open_zero=True)

    d1 = 1.0 + (n1 - 1) * p + n2 * q
    d2 = 1.0 + (n2 - 1) * p + n1 * q

    raw = [
        ((1.0 - p) / d1, n1 - 1),
        ((1.0 - p) / d2, n2 - 1),
        (1.0 - (n2 / d1 + n1 / d2) * q, 1),
        (1.0, 1),
    ]

    merged: List[Tuple[float, int]] = []
    for lam, mult in sorted(raw):
        if mult == 0:
            continue
        if merged and abs(merged[-1][0] - lam) <= merge_tol:
            merged[-1] = (merged[-1][0], merged[-1][1] + mult)
        else:
            merged.append((lam, mult))

    return merged


def expand_multiset(spectrum: List[Tuple[float, int]]) -> np.ndarray:
    """[(lam, m), ...] -> sorted array with every lam repeated m times"""
    return np.sort(np.concatenate([np.full(m, lam) for lam, m in spectrum]))
