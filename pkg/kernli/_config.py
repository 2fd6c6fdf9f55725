"""
    Configuration module for kernli package.

    `DEFAULTS` holds every tunable constant. A YAML (or JSON) file named by the
    `KERNLI_CONFIG` environment variable overrides them at import time.
"""
from __future__ import annotations
import os
from copy import deepcopy
from typing import Any, Dict

import yaml

from .errors import ConfigError

DEFAULTS: Dict[str, Any] = {
    # graph-core
    "max_nodes": 4096,
    # kernels
    "poisson_r": 0.5,
    "idempotency_tol_factor": 1.0e-8,  # tolerance is factor * n
    "symmetry_tol": 1.0e-10,
    # synth
    "split_fractions": [0.1, 0.2, 0.7],
    "rng_name": "numpy.PCG64",
    # models
    "hidden_dim": 16,
    "epochs": 200,
    "learning_rate": 0.01,
    "weight_decay": 5.0e-4,
    "sgc_power": 2,
    "sgc_standardize": True,  # zero mean, unit variance columns of F^k X
    "optimizer": "adam",
    "adam_betas": [0.9, 0.999],
    "adam_eps": 1.0e-8,
    "log_every": 50,
    # bench
    "workers": 1,
}


def load_config(path: str) -> Dict[str, Any]:
    """
    Read a YAML or JSON mapping from file
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path) as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as xc:
            raise ConfigError(f"{path}: cannot parse config ({xc})")

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level of a config file must be a mapping")
    return data


def get(key: str):
    return deepcopy(DEFAULTS[key])


def update(overrides: Dict[str, Any]):
    """
    Override defaults in place. Unknown keys are rejected.
    """
    unknown = set(overrides) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")
    DEFAULTS.update(overrides)


if _env_path := os.environ.get("KERNLI_CONFIG"):
    update(load_config(_env_path))
