"""
    Full-batch semi-supervised training of a node classifier on a fixed kernel.
"""
from __future__ import annotations
from typing import Dict, Optional

import numpy as np

from ._core import (
    Model,
    ModelConfig,
    TrainReport,
    evaluate,
    make_optimizer,
    masked_cross_entropy,
)
from .. import _config
from .._logging import get_logger
from ..dtypes import Dataset
from ..errors import ConfigError, ShapeError
from ..kernels import as_spec, build_kernel

log = get_logger(__name__)


def _accuracies(logits, labels, split) -> Dict[str, Optional[float]]:
    return {
        k: (evaluate(logits, labels, split[k]) if len(split[k]) else None)
        for k in ("train", "val", "test")
    }


def train(
    dataset: Dataset,
    kernel,
    config: ModelConfig = None,
    F: np.ndarray = None,
) -> TrainReport:
    """
    Train `config.arch` on `dataset` with the kernel given as a KernelSpec or kernel string.
    The kernel is materialized once (or taken from `F` if already built).
    Model selection keeps the epoch with the best validation accuracy
    (train accuracy when there is no validation set); epoch 0 is the initialization.
    """
    spec = as_spec(kernel)
    cfg = config if config is not None else ModelConfig()

    g = dataset.graph
    if g.features is None or g.labels is None:
        raise ConfigError("Training needs a dataset with features and labels")
    if len(dataset.split.train) == 0:
        raise ConfigError("Training needs a non-empty train split")

    if F is None:
        F = build_kernel(g, spec)
    elif F.shape != (g.n, g.n):
        raise ShapeError("Precomputed kernel does not match the graph", F.shape, (g.n, g.n))

    X, Y = g.features, g.labels
    split = dataset.split
    select = "val" if len(split.val) else "train"

    model = Model.from_config(cfg)
    model.init_params(np.random.default_rng(cfg.init_seed), X.shape[1], g.n_classes)
    model.prepare(F, X)
    opt = make_optimizer(cfg)
    log_every = _config.get("log_every")

    logits, cache = model.forward()
    loss, dlogits = masked_cross_entropy(logits, Y, split.train)
    initial_loss = loss

    best_epoch = 0
    best_acc = _accuracies(logits, Y, split)
    loss_curve = []

    for epoch in range(1, cfg.epochs + 1):
        grads = model.backward(cache, dlogits)
        for k in model.decayed:
            grads[k] = grads[k] + cfg.weight_decay * model.params[k]
        opt.step(model.params, grads)

        logits, cache = model.forward()
        loss, dlogits = masked_cross_entropy(logits, Y, split.train)
        loss_curve.append(loss)

        acc = _accuracies(logits, Y, split)
        if acc[select] > best_acc[select]:
            best_epoch, best_acc = epoch, acc

        if log_every and epoch % log_every == 0:
            log.info(
                f"{cfg.arch} {spec} epoch {epoch:>4}: loss {loss:.4f} "
                f"train {acc['train']:.3f} {select} {acc[select]:.3f}"
            )

    log.info(f"{cfg.arch} {spec}: best epoch {best_epoch}, test accuracy {best_acc['test']}")

    return TrainReport(
        loss_curve=loss_curve,
        initial_loss=initial_loss,
        accuracy=best_acc,
        best_epoch=best_epoch,
        epochs=cfg.epochs,
        kernel=spec.to_string(),
        model=cfg.to_dict(),
        dataset=dict(dataset.provenance),
        seed=int(cfg.init_seed),
    )
