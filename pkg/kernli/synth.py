"""
    Stochastic block model datasets.

    Random stream order for a given seed (numpy PCG64):
        labels (deterministic, no draws)
        -> edges, one uniform per node pair in row-major upper-triangle order
        -> features, node by node
        -> split, class by class
"""
from __future__ import annotations
from dataclasses import dataclass, asdict, field, replace
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from . import _config
from ._logging import get_logger
from .dtypes import Dataset, Graph, Split
from .errors import ConfigError

log = get_logger(__name__)


@dataclass(frozen=True)
class SbmConfig:
    class_sizes: Tuple[int, ...]
    p_intra: float
    q_inter: float
    feature_dim: int = 32
    feature_mean_scale: float = 1.0
    feature_std: float = 1.0
    seed: int = 0
    split_fractions: Tuple[float, float, float] = field(
        default_factory=lambda: tuple(_config.get("split_fractions"))
    )

    def __post_init__(self):
        object.__setattr__(self, "class_sizes", tuple(int(x) for x in self.class_sizes))
        object.__setattr__(
            self, "split_fractions", tuple(float(x) for x in self.split_fractions)
        )
        self.validate()

    def validate(self):
        if len(self.class_sizes) < 1 or any(c < 1 for c in self.class_sizes):
            raise ConfigError(f"Class sizes must be positive, got {self.class_sizes}")
        for name in ("p_intra", "q_inter"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise ConfigError(f"{name} = {x} outside [0, 1]")
        if self.feature_dim < len(self.class_sizes):
            raise ConfigError(
                f"feature_dim ({self.feature_dim}) must be at least the number of classes "
                f"({len(self.class_sizes)})"
            )
        if not self.feature_std > 0:
            raise ConfigError(f"feature_std must be positive, got {self.feature_std}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        n = sum(self.class_sizes)
        cap = _config.get("max_nodes")
        if n > cap:
            raise ConfigError(f"{n} nodes requested, above the node cap of {cap}")

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    @property
    def n_classes(self) -> int:
        return len(self.class_sizes)

    @property
    def density(self) -> float:
        return 0.5 * (self.p_intra + self.q_inter)

    @property
    def density_gap(self) -> float:
        return abs(self.p_intra - self.q_inter)

    def with_seed(self, seed: int) -> SbmConfig:
        return replace(self, seed=int(seed))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class_sizes"] = list(self.class_sizes)
        d["split_fractions"] = list(self.split_fractions)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SbmConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"Unknown SBM config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as xc:
            raise ConfigError(f"Incomplete SBM config: {xc}")


def class_means(cfg: SbmConfig) -> np.ndarray:
    """
    (C, d) matrix. Class c has mean feature_mean_scale on the coordinate block
    [c * b, (c + 1) * b), b = d // C, and zero elsewhere.
    """
    C, d = cfg.n_classes, cfg.feature_dim
    b = d // C
    M = np.zeros((C, d))
    for c in range(C):
        M[c, c * b : (c + 1) * b] = cfg.feature_mean_scale
    return M


def make_split(
    n: int,
    labels: np.ndarray,
    fractions: Sequence[float] = None,
    seed=0,
) -> Split:
    """
    Stratified train/val/test split, see `Split.stratified`.
    `seed` may be an integer or a numpy Generator (used in place).
    """
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise ConfigError(f"Expected {n} labels, got {labels.shape}")
    return Split.stratified(labels, fractions, seed=seed)


def generate(cfg: SbmConfig) -> Dataset:
    """
    Draw a dataset from the block model. Pure function of `cfg` (seed included).
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    n = cfg.n

    labels = np.repeat(np.arange(cfg.n_classes), cfg.class_sizes)

    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(labels[iu] == labels[ju], cfg.p_intra, cfg.q_inter)
    hit = rng.random(len(iu)) < prob
    edges = zip(iu[hit].tolist(), ju[hit].tolist())

    X = class_means(cfg)[labels] + cfg.feature_std * rng.standard_normal(
        (n, cfg.feature_dim)
    )

    graph = Graph(n, edges, features=X, labels=labels)
    split = make_split(n, labels, cfg.split_fractions, seed=rng)

    n_comp = len(graph.connected_components())
    warnings = []
    if n_comp > 1:
        msg = f"generated graph has {n_comp} connected components"
        warnings.append(msg)
        log.warning(f"seed {cfg.seed}: {msg}")

    provenance = {
        "generator": "sbm",
        "config": cfg.to_dict(),
        "seed": int(cfg.seed),
        "rng": _config.get("rng_name"),
        "components": n_comp,
        "warnings": warnings,
    }

    return Dataset(graph, split, provenance)


def preset_smallgap(seed: int = 0) -> SbmConfig:
    """
    Two balanced classes, |p - q| much smaller than the density
    """
    return SbmConfig(
        class_sizes=(200, 200),
        p_intra=0.05,
        q_inter=0.045,
        feature_dim=32,
        feature_mean_scale=1.5,
        feature_std=1.0,
        seed=seed,
    )


def preset_smallratio(seed: int = 0) -> SbmConfig:
    """
    Imbalanced classes, 80 vs 320 (majority baseline 0.8)
    """
    return SbmConfig(
        class_sizes=(80, 320),
        p_intra=0.10,
        q_inter=0.05,
        feature_dim=32,
        feature_mean_scale=0.6,
        feature_std=1.0,
        seed=seed,
    )


def preset_largegap(seed: int = 0) -> SbmConfig:
    """
    Two balanced classes that are nearly disconnected (q close to 0)
    """
    return SbmConfig(
        class_sizes=(200, 200),
        p_intra=0.05,
        q_inter=0.0005,
        feature_dim=32,
        feature_mean_scale=1.0,
        feature_std=1.0,
        seed=seed,
    )


PRESETS: Dict[str, Callable[[int], SbmConfig]] = {
    "smallgap": preset_smallgap,
    "smallratio": preset_smallratio,
    "largegap": preset_largegap,
}


def get_preset(name: str, seed: int = 0) -> SbmConfig:
    try:
        return PRESETS[name.lower()](seed)
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}'. Available: {sorted(PRESETS)}")


def density_stats(cfg: SbmConfig) -> Tuple[float, float, float]:
    """
    (density rho, density gap eps, label ratio).
    The ratio is n1/n2 for two classes and smallest/largest otherwise.
    """
    sizes = cfg.class_sizes
    if len(sizes) == 2:
        ratio = sizes[0] / sizes[1]
    else:
        ratio = min(sizes) / max(sizes)
    return cfg.density, cfg.density_gap, ratio


def majority_fraction(labels: np.ndarray) -> float:
    return float(np.bincount(labels).max() / len(labels))


def ingest(path: str, fractions: Sequence[float] = None) -> Dataset:
    """Read a dataset directory"""
    return Dataset.from_dir(path, fractions=fractions)


def export(ds: Dataset, path: str):
    """Write a dataset directory"""
    ds.to_dir(path)
