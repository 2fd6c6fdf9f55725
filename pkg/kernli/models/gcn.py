"""
    Two-layer graph convolutional network

        H1 = relu(F X W0)
        logits = F H1 W1

    with hand-written gradients. relu'(0) is taken to be 0.
"""
from __future__ import annotations
from typing import Tuple

import numpy as np

from ._core import Model, ModelConfig, glorot_uniform
from ..errors import ShapeError


class GCNCache:
    """
    Activations of one forward pass, kept for the backward pass
    """

    def __init__(self, F, FX, W0, W1, Z1, H1, FH1):
        self.F = F
        self.FX = FX
        self.W0 = W0
        self.W1 = W1
        self.Z1 = Z1
        self.H1 = H1
        self.FH1 = FH1

    @property
    def logits_shape(self) -> Tuple[int, int]:
        return (self.FH1.shape[0], self.W1.shape[1])


def _check_dims(F, X, W0, W1):
    n = F.shape[0]
    if F.shape != (n, n):
        raise ShapeError("Kernel must be square", F.shape)
    if X.shape[0] != n:
        raise ShapeError("Kernel and features disagree on node count", F.shape, X.shape)
    if W0.shape[0] != X.shape[1]:
        raise ShapeError("Features and first layer weights disagree", X.shape, W0.shape)
    if W1.shape[0] != W0.shape[1]:
        raise ShapeError("First and second layer weights disagree", W0.shape, W1.shape)


def gcn_forward(
    F: np.ndarray, X: np.ndarray, W0: np.ndarray, W1: np.ndarray, FX: np.ndarray = None
) -> Tuple[np.ndarray, GCNCache]:
    """
    Returns (logits, cache). Softmax is left to the loss.
    FX = F @ X may be passed in when it has been precomputed.
    """
    F, X, W0, W1 = (np.asarray(a, dtype=np.float64) for a in (F, X, W0, W1))
    _check_dims(F, X, W0, W1)

    if FX is None:
        FX = F @ X
    Z1 = FX @ W0
    H1 = np.maximum(Z1, 0.0)
    FH1 = F @ H1
    logits = FH1 @ W1

    return logits, GCNCache(F, FX, W0, W1, Z1, H1, FH1)


def gcn_backward(cache: GCNCache, dlogits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gradients (dW0, dW1) of a scalar loss, given dloss/dlogits
    """
    dlogits = np.asarray(dlogits, dtype=np.float64)
    if dlogits.shape != cache.logits_shape:
        raise ShapeError("Stale cache: gradient shape differs from the cached logits", dlogits.shape, cache.logits_shape)

    dW1 = cache.FH1.T @ dlogits
    dH1 = cache.F.T @ (dlogits @ cache.W1.T)
    dZ1 = dH1 * (cache.Z1 > 0.0)
    dW0 = cache.FX.T @ dZ1

    return dW0, dW1


class GCNModel(Model):
    decayed = ("W0",)

    def init_params(self, rng: np.random.Generator, d: int, C: int):
        h = self.cfg.hidden_dim
        self.params = {"W0": glorot_uniform(rng, d, h), "W1": glorot_uniform(rng, h, C)}

    def prepare(self, F: np.ndarray, X: np.ndarray):
        self._F = F
        self._X = X
        self._FX = F @ X

    def forward(self):
        return gcn_forward(self._F, self._X, self.params["W0"], self.params["W1"], FX=self._FX)

    def backward(self, cache, dlogits):
        dW0, dW1 = gcn_backward(cache, dlogits)
        return {"W0": dW0, "W1": dW1}
