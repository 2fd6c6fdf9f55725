"""
    Benchmark grid: every (dataset, model, kernel, seed) combination is trained once
    and reported as one row of a results table.

    Cells are independent. Cell `i` with listed seed `s` initializes its weights
    from SeedSequence([s, i]), so the table does not depend on the number of workers.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from typing import Dict, List, Optional, Tuple
import os

import numpy as np
import pandas as pd

from . import _config
from ._logging import get_logger
from .dtypes import Dataset
from .errors import ConfigError, KernelSpecError
from .kernels import parse_kernel
from .models import ModelConfig, train
from .synth import PRESETS, generate, get_preset
from .utils import WCTimer

log = get_logger(__name__)

RAW_COLUMNS = [
    "dataset",
    "model",
    "kernel",
    "seed",
    "test_accuracy",
    "val_accuracy",
    "train_accuracy",
    "best_epoch",
    "wall_time_s",
    "error",
]
GROUP_KEYS = ["dataset", "model", "kernel"]


@dataclass(frozen=True)
class BenchDataset:
    """A preset name (regenerated per seed) or a dataset directory (seed-independent)"""

    name: str
    preset: Optional[str] = None
    path: Optional[str] = None

    def __post_init__(self):
        if (self.preset is None) == (self.path is None):
            raise ConfigError(f"Dataset '{self.name}' needs exactly one of 'preset' or 'path'")
        if self.preset is not None and self.preset.lower() not in PRESETS:
            raise ConfigError(f"Dataset '{self.name}': unknown preset '{self.preset}'")

    @classmethod
    def from_entry(cls, entry) -> BenchDataset:
        if isinstance(entry, str):
            return cls(name=entry, preset=entry)
        if not isinstance(entry, dict):
            raise ConfigError(f"Dataset entry must be a preset name or a mapping, got {entry!r}")
        unknown = set(entry) - {"name", "preset", "path"}
        if unknown:
            raise ConfigError(f"Unknown dataset keys: {sorted(unknown)}")
        name = entry.get("name") or entry.get("preset") or os.path.basename(str(entry.get("path", "")).rstrip("/"))
        return cls(name=name, preset=entry.get("preset"), path=entry.get("path"))


@dataclass(frozen=True)
class BenchModel:
    """An architecture with ModelConfig overrides, labelled `name` in the table"""

    name: str
    arch: str
    overrides: Tuple[Tuple[str, object], ...] = ()

    def config(self, init_seed: int) -> ModelConfig:
        return ModelConfig.from_dict({"arch": self.arch, **dict(self.overrides), "init_seed": init_seed})

    @classmethod
    def from_entry(cls, entry) -> BenchModel:
        if isinstance(entry, str):
            entry = {"arch": entry}
        if not isinstance(entry, dict) or "arch" not in entry:
            raise ConfigError(f"Model entry needs an 'arch', got {entry!r}")
        entry = dict(entry)
        arch = str(entry.pop("arch")).upper()
        name = str(entry.pop("name", arch))
        if "init_seed" in entry:
            raise ConfigError("init_seed is derived per cell and cannot be overridden")
        m = cls(name=name, arch=arch, overrides=tuple(sorted(entry.items())))
        m.config(0)  # validates the overrides
        return m


@dataclass(frozen=True)
class BenchConfig:
    datasets: Tuple[BenchDataset, ...]
    kernels: Tuple[str, ...]
    models: Tuple[BenchModel, ...]
    seeds: Tuple[int, ...]
    output: Optional[str] = None
    timing: bool = False
    workers: int = field(default_factory=lambda: _config.get("workers"))

    def __post_init__(self):
        for name in ("datasets", "kernels", "models", "seeds"):
            if not getattr(self, name):
                raise ConfigError(f"Bench config needs a non-empty '{name}' list")

        canonical = []
        for k in self.kernels:
            try:
                canonical.append(parse_kernel(k).to_string())
            except KernelSpecError as xc:
                raise ConfigError(f"Bench kernel {k!r}: {xc}")
        object.__setattr__(self, "kernels", tuple(canonical))

        for label, items in (("dataset", self.datasets), ("model", self.models)):
            names = [x.name for x in items]
            if len(set(names)) != len(names):
                raise ConfigError(f"Duplicate {label} names in bench config: {names}")

        if any(int(s) != s or s < 0 for s in self.seeds):
            raise ConfigError(f"Seeds must be non-negative integers, got {list(self.seeds)}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError(f"workers must be a positive integer, got {self.workers}")

    @property
    def grid_size(self) -> int:
        return len(self.datasets) * len(self.models) * len(self.kernels) * len(self.seeds)

    def cells(self) -> List[tuple]:
        """(cell_index, dataset, model, kernel, seed) in table order"""
        out = []
        for ds in self.datasets:
            for m in self.models:
                for k in self.kernels:
                    for s in self.seeds:
                        out.append((len(out), ds, m, k, int(s)))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> BenchConfig:
        known = {"datasets", "kernels", "models", "seeds", "output", "timing", "workers"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"Unknown bench config keys: {sorted(unknown)}")
        missing = {"datasets", "kernels", "models", "seeds"} - set(d)
        if missing:
            raise ConfigError(f"Bench config is missing {sorted(missing)}")

        kw = {
            "datasets": tuple(BenchDataset.from_entry(x) for x in d["datasets"]),
            "kernels": tuple(str(x) for x in d["kernels"]),
            "models": tuple(BenchModel.from_entry(x) for x in d["models"]),
            "seeds": tuple(d["seeds"]),
            "output": d.get("output"),
            "timing": bool(d.get("timing", False)),
        }
        if "workers" in d:
            kw["workers"] = d["workers"]
        return cls(**kw)

    @classmethod
    def from_file(cls, path: str) -> BenchConfig:
        return cls.from_dict(_config.load_config(path))


def default_config() -> BenchConfig:
    """Two synthetic regimes, five kernels, GCN and SGC, five seeds"""
    return BenchConfig.from_dict(
        {
            "datasets": ["smallgap", "smallratio"],
            "kernels": ["laplacian", "power:k=2", "limit", "linear", "poisson:r=0.5"],
            "models": ["GCN", "SGC"],
            "seeds": [0, 1, 2, 3, 4],
        }
    )


@lru_cache(maxsize=16)
def load_dataset(ds: BenchDataset, seed: int) -> Dataset:
    if ds.preset is not None:
        return generate(get_preset(ds.preset, seed))
    return Dataset.from_dir(ds.path)


def cell_init_seed(seed: int, cell_index: int) -> int:
    return int(np.random.SeedSequence([seed, cell_index]).generate_state(1)[0])


def run_cell(cell: tuple, timing: bool = False) -> Dict[str, object]:
    """
    Train one cell. Failures are reported in the `error` field, never raised.
    """
    idx, ds, m, kernel, seed = cell
    row = dict.fromkeys(RAW_COLUMNS)
    row.update(dataset=ds.name, model=m.name, kernel=kernel, seed=seed)

    try:
        with WCTimer(f"cell {idx}") as t:
            dataset = load_dataset(ds, seed)
            report = train(dataset, kernel, m.config(cell_init_seed(seed, idx)))
    except Exception as xc:
        log.warning(f"cell {idx} ({ds.name}, {m.name}, {kernel}, seed {seed}) failed: {xc}")
        row["error"] = f"{type(xc).__name__}: {xc}"
        return row

    row.update(
        test_accuracy=report.accuracy["test"],
        val_accuracy=report.accuracy["val"],
        train_accuracy=report.accuracy["train"],
        best_epoch=report.best_epoch,
    )
    if timing:
        row["wall_time_s"] = t.elapsed
    return row


def _run_timed(cell):
    return run_cell(cell, timing=True)


def _run_untimed(cell):
    return run_cell(cell, timing=False)


def run_grid(cfg: BenchConfig, workers: int = None) -> pd.DataFrame:
    """
    Run the full grid and return the raw table, one row per cell in grid order
    """
    workers = cfg.workers if workers is None else workers
    cells = cfg.cells()
    fx = _run_timed if cfg.timing else _run_untimed

    log.info(f"bench: {len(cells)} cells on {workers} worker(s)")

    if workers == 1:
        rows = [fx(c) for c in cells]
    else:
        with Pool(workers) as pool:
            rows = pool.map(fx, cells)

    raw = pd.DataFrame(rows, columns=RAW_COLUMNS)
    raw["best_epoch"] = raw["best_epoch"].astype("Int64")
    return raw


def summarize(raw: pd.DataFrame) -> pd.DataFrame:
    """
    Mean, population std and count of test accuracy over seeds, per (dataset, model, kernel).
    Failed cells do not enter the statistics and are counted in `failed`.
    """
    grouped = raw.groupby(GROUP_KEYS, sort=False)
    acc = grouped["test_accuracy"]
    summary = pd.DataFrame(
        {
            "mean": acc.mean(),
            "std": acc.std(ddof=0),
            "n": acc.count(),
            "failed": grouped["error"].apply(lambda s: int(s.notna().sum())),
        }
    )
    return summary.reset_index()


def accuracy_table(summary: pd.DataFrame) -> pd.DataFrame:
    """
    Rows (model, kernel), one column per dataset, cells "mean ± std" in percent
    """
    cell = summary.apply(
        lambda r: "" if r["n"] == 0 else f"{100 * r['mean']:.2f} ± {100 * r['std']:.2f}", axis=1
    )
    table = summary.assign(cell=cell).pivot(index=["model", "kernel"], columns="dataset", values="cell")

    rows = list(dict.fromkeys(zip(summary["model"], summary["kernel"])))
    cols = list(dict.fromkeys(summary["dataset"]))
    table = table.reindex(index=pd.MultiIndex.from_tuples(rows, names=["model", "kernel"]), columns=cols)
    table.columns.name = None
    return table.reset_index()


def companion_paths(out_csv: str) -> Tuple[str, str]:
    stem, _ = os.path.splitext(out_csv)
    return f"{stem}.summary.csv", f"{stem}.table.csv"


def write_results(raw: pd.DataFrame, out_csv: str) -> Tuple[str, str, str]:
    """
    Write the raw table and its two companions. Returns the three paths.
    """
    d = os.path.dirname(os.path.abspath(out_csv))
    os.makedirs(d, exist_ok=True)

    summary = summarize(raw)
    summary_csv, table_csv = companion_paths(out_csv)

    raw.to_csv(out_csv, index=False)
    summary.to_csv(summary_csv, index=False)
    accuracy_table(summary).to_csv(table_csv, index=False)

    return out_csv, summary_csv, table_csv
