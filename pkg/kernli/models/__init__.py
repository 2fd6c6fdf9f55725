"""
    Node classifiers trained on a fixed graph convolutional kernel
"""
from ._core import (
    ARCHS,
    ModelConfig,
    TrainReport,
    Model,
    Adam,
    SGD,
    masked_cross_entropy,
    evaluate,
    glorot_uniform,
    log_softmax,
)
from .gcn import GCNModel, GCNCache, gcn_forward, gcn_backward
from .sgc import SGCModel, sgc_forward, sgc_propagate, standardize_columns
from .training import train
