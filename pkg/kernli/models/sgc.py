"""
    Simplified graph convolution: a linear classifier on propagated features

        logits = F^k X W

    By default the columns of F^k X are standardized before the linear layer.
"""
from __future__ import annotations

import numpy as np

from ._core import Model, glorot_uniform
from ..errors import ConfigError, ShapeError
from ..math import matrix_power


def sgc_propagate(F: np.ndarray, k: int, X: np.ndarray) -> np.ndarray:
    """F^k X. Computed once per training run."""
    if int(k) != k or k < 1:
        raise ConfigError(f"SGC power must be a positive integer, got {k}")
    F = np.asarray(F, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] != F.shape[0]:
        raise ShapeError("Kernel and features disagree on node count", F.shape, X.shape)
    return matrix_power(F, k) @ X


def standardize_columns(Z: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """
    Zero mean, unit variance columns. Constant columns are only centered.
    """
    Z = np.asarray(Z, dtype=np.float64)
    mu = Z.mean(axis=0)
    sd = Z.std(axis=0)
    return (Z - mu) / np.where(sd > eps, sd, 1.0)


def sgc_forward(
    F: np.ndarray, k: int, X: np.ndarray, W: np.ndarray, FkX: np.ndarray = None
) -> np.ndarray:
    if FkX is None:
        FkX = sgc_propagate(F, k, X)
    W = np.asarray(W, dtype=np.float64)
    if W.shape[0] != FkX.shape[1]:
        raise ShapeError("Features and weights disagree", FkX.shape, W.shape)
    return FkX @ W


class SGCCache:
    def __init__(self, FkX, W):
        self.FkX = FkX
        self.W = W


class SGCModel(Model):
    decayed = ("W",)

    def init_params(self, rng: np.random.Generator, d: int, C: int):
        self.params = {"W": glorot_uniform(rng, d, C)}

    def prepare(self, F: np.ndarray, X: np.ndarray):
        FkX = sgc_propagate(F, self.cfg.sgc_power, X)
        # W has no bias term; the common column offset of F^k X is removed here
        self._FkX = standardize_columns(FkX) if self.cfg.sgc_standardize else FkX

    def forward(self):
        W = self.params["W"]
        return sgc_forward(None, self.cfg.sgc_power, None, W, FkX=self._FkX), SGCCache(self._FkX, W)

    def backward(self, cache: SGCCache, dlogits):
        if dlogits.shape != (cache.FkX.shape[0], cache.W.shape[1]):
            raise ShapeError("Stale cache: gradient shape differs from the cached logits", dlogits.shape)
        return {"W": cache.FkX.T @ dlogits}
