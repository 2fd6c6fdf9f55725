from __future__ import annotations
from dataclasses import dataclass, asdict, field, replace
from typing import Dict, List, Optional
import json

import numpy as np

from .. import _config
from ..errors import ConfigError, ShapeError

ARCHS = ("GCN", "SGC")
OPTIMIZERS = ("adam", "sgd")
REPORT_SCHEMA = "kernli.train_report/1"


@dataclass(frozen=True)
class ModelConfig:
    """
    Model and optimizer settings. `hidden_dim` is used by GCN only,
    `sgc_power` and `sgc_standardize` by SGC only.
    """

    arch: str = "GCN"
    hidden_dim: int = field(default_factory=lambda: _config.get("hidden_dim"))
    epochs: int = field(default_factory=lambda: _config.get("epochs"))
    learning_rate: float = field(default_factory=lambda: _config.get("learning_rate"))
    weight_decay: float = field(default_factory=lambda: _config.get("weight_decay"))
    init_seed: int = 0
    sgc_power: int = field(default_factory=lambda: _config.get("sgc_power"))
    optimizer: str = field(default_factory=lambda: _config.get("optimizer"))
    sgc_standardize: bool = field(default_factory=lambda: _config.get("sgc_standardize"))

    def __post_init__(self):
        arch = str(self.arch).upper()
        object.__setattr__(self, "arch", arch)
        object.__setattr__(self, "optimizer", str(self.optimizer).lower())

        if arch not in ARCHS:
            raise ConfigError(f"Unknown architecture '{self.arch}', expected one of {ARCHS}")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"Unknown optimizer '{self.optimizer}', expected one of {OPTIMIZERS}")
        if int(self.epochs) != self.epochs or self.epochs < 0:
            raise ConfigError(f"epochs must be a non-negative integer, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be non-negative, got {self.weight_decay}")
        if int(self.hidden_dim) != self.hidden_dim or self.hidden_dim < 1:
            raise ConfigError(f"hidden_dim must be a positive integer, got {self.hidden_dim}")
        if int(self.sgc_power) != self.sgc_power or self.sgc_power < 1:
            raise ConfigError(f"sgc_power must be a positive integer, got {self.sgc_power}")
        if not isinstance(self.sgc_standardize, (bool, np.bool_)):
            raise ConfigError(f"sgc_standardize must be true or false, got {self.sgc_standardize!r}")

    def replace(self, **kwargs) -> ModelConfig:
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> ModelConfig:
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown model config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class TrainReport:
    """
    Outcome of one training run. `accuracy` holds train/val/test at `best_epoch`
    (0 means the initial weights); an empty split has accuracy None.
    `loss_curve[e - 1]` is the masked training loss after epoch e.
    """

    loss_curve: List[float]
    initial_loss: float
    accuracy: Dict[str, Optional[float]]
    best_epoch: int
    epochs: int
    kernel: str
    model: dict
    dataset: dict
    seed: int
    schema: str = REPORT_SCHEMA

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> TrainReport:
        return cls(**json.loads(s))

    @property
    def test_accuracy(self) -> Optional[float]:
        return self.accuracy["test"]


def _mask_index(mask, n: int) -> np.ndarray:
    m = np.asarray(mask)
    if m.dtype == bool:
        if m.shape != (n,):
            raise ShapeError("Boolean mask does not match the number of nodes", m.shape, (n,))
        idx = np.flatnonzero(m)
    else:
        idx = m.astype(np.int64).ravel()
    if idx.size == 0:
        raise ConfigError("Mask selects no nodes")
    return idx


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def masked_cross_entropy(logits: np.ndarray, labels: np.ndarray, mask):
    """
    Mean of -log softmax(logits)[label] over masked nodes.
    Returns (loss, dloss/dlogits); gradient rows of unmasked nodes are exactly zero.
    """
    logits = np.asarray(logits, dtype=np.float64)
    n, C = logits.shape
    idx = _mask_index(mask, n)
    y = np.asarray(labels)[idx]

    lsm = log_softmax(logits[idx])
    loss = -float(np.mean(lsm[np.arange(len(idx)), y]))

    g = np.exp(lsm)
    g[np.arange(len(idx)), y] -= 1.0
    grad = np.zeros_like(logits)
    grad[idx] = g / len(idx)

    return loss, grad


def evaluate(logits: np.ndarray, labels: np.ndarray, mask) -> float:
    """
    Fraction of masked nodes whose argmax logit is the label.
    Ties go to the lowest class index.
    """
    logits = np.asarray(logits)
    idx = _mask_index(mask, logits.shape[0])
    pred = np.argmax(logits[idx], axis=1)
    return float(np.mean(pred == np.asarray(labels)[idx]))


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class Optimizer:
    """
    Full-batch update rule over a dict of named parameters
    """

    def __init__(self, lr: float):
        self.lr = lr

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]):
        raise NotImplementedError


class SGD(Optimizer):
    def step(self, params, grads):
        for k in params:
            params[k] = params[k] - self.lr * grads[k]


class Adam(Optimizer):
    def __init__(self, lr: float, betas=None, eps: float = None):
        super().__init__(lr)
        self.b1, self.b2 = betas if betas is not None else _config.get("adam_betas")
        self.eps = _config.get("adam_eps") if eps is None else eps
        self.t = 0
        self.m = {}
        self.v = {}

    def step(self, params, grads):
        self.t += 1
        c1 = 1.0 - self.b1**self.t
        c2 = 1.0 - self.b2**self.t

        for k in params:
            g = grads[k]
            if k not in self.m:
                self.m[k] = np.zeros_like(g)
                self.v[k] = np.zeros_like(g)
            self.m[k] = self.b1 * self.m[k] + (1.0 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1.0 - self.b2) * g * g
            params[k] = params[k] - self.lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + self.eps)


def make_optimizer(cfg: ModelConfig) -> Optimizer:
    if cfg.optimizer == "adam":
        return Adam(cfg.learning_rate)
    return SGD(cfg.learning_rate)


class Model:
    """
    Base class of the node classifiers. A model holds its weights in `params`,
    precomputes whatever depends only on (kernel, features) in `prepare`, and
    exposes forward/backward over a cache object.

    `decayed` names the parameters that receive weight decay.
    """

    decayed: tuple = ()

    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg
        self.params: Dict[str, np.ndarray] = {}

    def init_params(self, rng: np.random.Generator, d: int, C: int):
        raise NotImplementedError

    def prepare(self, F: np.ndarray, X: np.ndarray):
        raise NotImplementedError

    def forward(self):
        """returns (logits, cache)"""
        raise NotImplementedError

    def backward(self, cache, dlogits: np.ndarray) -> Dict[str, np.ndarray]:
        raise NotImplementedError

    @staticmethod
    def from_config(cfg: ModelConfig) -> Model:
        from .gcn import GCNModel
        from .sgc import SGCModel

        return {"GCN": GCNModel, "SGC": SGCModel}[cfg.arch](cfg)
