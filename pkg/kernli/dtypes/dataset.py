from __future__ import annotations
from typing import Dict, Sequence, Union
import json
import os

import numpy as np

from .graph import Graph
from .. import _config
from ..errors import ConfigError, DatasetFormatError
from ..ftypes import (
    parse_edges,
    parse_features,
    parse_labels,
    parse_split,
    format_edges,
    format_features,
    format_labels,
)

_SPLITS = ("train", "val", "test")


class Split:
    """
    Three disjoint sets of node indices. Stored as sorted integer arrays.
    """

    def __init__(self, train, val=(), test=()):
        self.train = np.sort(np.asarray(train, dtype=np.int64))
        self.val = np.sort(np.asarray(val, dtype=np.int64))
        self.test = np.sort(np.asarray(test, dtype=np.int64))

        for a in (self.train, self.val, self.test):
            a.setflags(write=False)

        allidx = np.concatenate([self.train, self.val, self.test])
        if len(np.unique(allidx)) != len(allidx):
            raise ConfigError("Split sets overlap or contain repeated nodes")

    def __getitem__(self, name: str) -> np.ndarray:
        if name not in _SPLITS:
            raise KeyError(name)
        return getattr(self, name)

    def __eq__(self, o: Split) -> bool:
        if not isinstance(o, Split):
            return NotImplemented
        return all(np.array_equal(self[k], o[k]) for k in _SPLITS)

    def __repr__(self):
        return f"Split(train={len(self.train)}, val={len(self.val)}, test={len(self.test)})"

    def sizes(self) -> Dict[str, int]:
        return {k: len(self[k]) for k in _SPLITS}

    def mask(self, name: str, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[self[name]] = True
        return m

    def to_dict(self) -> Dict[str, list]:
        return {k: self[k].tolist() for k in _SPLITS}

    def check(self, n: int):
        for k in _SPLITS:
            a = self[k]
            if len(a) and (a[0] < 0 or a[-1] >= n):
                raise ConfigError(f"Split '{k}' has node indices outside [0, {n})")

    @classmethod
    def stratified(
        cls,
        labels: np.ndarray,
        fractions: Sequence[float] = None,
        seed: Union[int, np.random.Generator] = 0,
    ) -> Split:
        """
        Stratified split: every class is shuffled with the seeded generator and cut
        into train/val/test by `fractions`.

        Per class of size m, each part first gets floor(f * m) nodes, then the
        nodes up to floor(sum(f) * m) are handed out by largest remainder
        (earlier part wins ties). A class never ends up without a train node.
        """
        if fractions is None:
            fractions = _config.get("split_fractions")
        f = np.asarray(fractions, dtype=np.float64)

        if f.shape != (3,) or np.any(f < 0) or f[0] <= 0:
            raise ConfigError(
                f"Split fractions must be (train > 0, val >= 0, test >= 0), got {list(fractions)}"
            )
        if f.sum() > 1.0 + 1e-12:
            raise ConfigError(f"Split fractions sum to {f.sum()} > 1")

        labels = np.asarray(labels)
        rng = np.random.default_rng(seed)
        parts = {k: [] for k in _SPLITS}

        for c in range(int(labels.max()) + 1):
            members = np.flatnonzero(labels == c)
            m = len(members)
            if m == 0:
                raise ConfigError(f"Class {c} has no nodes; cannot place it in the train set")

            idx = rng.permutation(members)

            raw = f * m
            counts = np.floor(raw + 1e-9).astype(int)
            target = int(np.floor(f.sum() * m + 1e-9))
            rema = raw - counts
            for k in np.argsort(-rema, kind="stable")[: max(0, target - counts.sum())]:
                counts[k] += 1

            if counts[0] == 0:
                # borrow from the part furthest above its share, or take an unassigned node
                donor = 1 + int(np.argmax(counts[1:] - raw[1:]))
                if counts[donor] > 0 and counts.sum() >= m:
                    counts[donor] -= 1
                counts[0] = 1

            s = np.cumsum(counts)
            parts["train"].append(idx[: s[0]])
            parts["val"].append(idx[s[0] : s[1]])
            parts["test"].append(idx[s[1] : s[2]])

        return cls(*(np.concatenate(parts[k]) for k in _SPLITS))


class Dataset:
    """
    A graph with features and labels, its train/val/test split,
    and a provenance record (generator config and seed, or ingestion source).
    """

    def __init__(self, graph: Graph, split: Split, provenance: dict = None):
        if graph.features is None or graph.labels is None:
            raise ConfigError("Dataset graph must carry features and labels")

        split.check(graph.n)

        train_classes = set(graph.labels[split.train].tolist())
        missing = set(range(graph.n_classes)) - train_classes
        if missing:
            raise ConfigError(f"Classes {sorted(missing)} do not appear in the train set")

        self.graph = graph
        self.split = split
        self.provenance = dict(provenance or {})
        self.provenance.setdefault("seed", None)

    def __eq__(self, o: Dataset) -> bool:
        if not isinstance(o, Dataset):
            return NotImplemented
        return (
            self.graph == o.graph
            and self.split == o.split
            and self.provenance == o.provenance
        )

    def __repr__(self):
        return f"Dataset({self.graph!r}, {self.split!r}, generator={self.provenance.get('generator')})"

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def features(self) -> np.ndarray:
        return self.graph.features

    @property
    def labels(self) -> np.ndarray:
        return self.graph.labels

    def meta(self) -> dict:
        return {
            "n": self.graph.n,
            "d": int(self.graph.features.shape[1]),
            "classes": self.graph.n_classes,
            **self.provenance,
        }

    def to_dir(self, path: str):
        """
        Write the dataset directory (created if needed)
        """
        os.makedirs(path, exist_ok=True)

        files = {
            "edges.csv": format_edges(self.graph.edges),
            "features.csv": format_features(self.graph.features),
            "labels.csv": format_labels(self.graph.labels),
            "split.json": json.dumps(self.split.to_dict()) + "\n",
            "meta.json": json.dumps(self.meta(), indent=2, sort_keys=True) + "\n",
        }

        for fn, text in files.items():
            with open(os.path.join(path, fn), "wt") as f:
                f.write(text)

    @classmethod
    def from_dir(cls, path: str, fractions: Sequence[float] = None) -> Dataset:
        """
        Read a dataset directory. Without split.json a stratified split is drawn
        with `fractions` and the seed recorded in meta.json (0 if none).
        """
        if not os.path.isdir(path):
            raise FileNotFoundError(f"Dataset directory not found: {path}")

        def read(fn, required=True):
            fp = os.path.join(path, fn)
            if not os.path.isfile(fp):
                if required:
                    raise DatasetFormatError(f"missing required file {fn}", fp)
                return None, fp
            with open(fp) as f:
                return f.read(), fp

        meta_text, meta_path = read("meta.json")
        try:
            meta = json.loads(meta_text)
        except json.JSONDecodeError as xc:
            raise DatasetFormatError(f"invalid JSON ({xc.msg})", meta_path, xc.lineno)

        for k in ("n", "d", "classes"):
            if not isinstance(meta.get(k), int):
                raise DatasetFormatError(f"meta.json needs an integer '{k}'", meta_path)
        n = meta["n"]

        edges = parse_edges(*read("edges.csv"), n=n)
        X = parse_features(*read("features.csv"))
        Y = parse_labels(*read("labels.csv"))

        if X.shape[0] != n:
            raise DatasetFormatError(
                f"{X.shape[0]} feature rows, expected n = {n}", os.path.join(path, "features.csv")
            )
        if X.shape[1] != meta["d"]:
            raise DatasetFormatError(
                f"{X.shape[1]} feature columns, expected d = {meta['d']}",
                os.path.join(path, "features.csv"),
            )
        if Y.shape[0] != n:
            raise DatasetFormatError(
                f"{Y.shape[0]} labels, expected n = {n}", os.path.join(path, "labels.csv")
            )

        graph = Graph(n, edges, features=X, labels=Y)

        provenance = {k: v for k, v in meta.items() if k not in ("n", "d", "classes")}
        if "generator" not in provenance:
            provenance["generator"] = "ingested"
            provenance["source"] = os.path.abspath(path)

        split_text, split_path = read("split.json", required=False)
        if split_text is not None:
            split = Split(**parse_split(split_text, split_path))
        else:
            seed = meta.get("seed") or 0
            split = Split.stratified(Y, fractions, seed=seed)

        return cls(graph, split, provenance)
