"""
    Parsers and writers for the files of a dataset directory:

        edges.csv      one "i,j" pair per line, 0-based, i<j, no header
        features.csv   n rows of comma-separated reals
        labels.csv     one integer per line
        split.json     {"train": [...], "val": [...], "test": [...]}

    Parsers take the file text and the path (for error messages only).
"""
from typing import Dict, List, Tuple
import json

import numpy as np

from ..errors import DatasetFormatError


def _lines(text: str):
    """
    Yield (line number, stripped line) for non-empty lines
    """
    for i, l in enumerate(text.splitlines(), start=1):
        l = l.strip()
        if l:
            yield i, l


def parse_edges(text: str, path: str = "edges.csv", n: int = None) -> List[Tuple[int, int]]:
    edges = []
    for ln, l in _lines(text):
        parts = l.split(",")
        if len(parts) != 2:
            raise DatasetFormatError(f"expected 'i,j', got {l!r}", path, ln)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise DatasetFormatError(f"non-integer node index in {l!r}", path, ln)
        if not 0 <= i < j:
            raise DatasetFormatError(f"edge must satisfy 0 <= i < j, got {l!r}", path, ln)
        if n is not None and j >= n:
            raise DatasetFormatError(f"node index {j} out of range for n = {n}", path, ln)
        edges.append((i, j))
    return edges


def parse_features(text: str, path: str = "features.csv") -> np.ndarray:
    rows = []
    width = None
    for ln, l in _lines(text):
        try:
            row = [float(x) for x in l.split(",")]
        except ValueError:
            raise DatasetFormatError(f"non-numeric feature value in {l!r}", path, ln)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DatasetFormatError(
                f"row has {len(row)} values, expected {width}", path, ln
            )
        rows.append(row)

    if not rows:
        raise DatasetFormatError("no feature rows", path)

    return np.array(rows, dtype=np.float64)


def parse_labels(text: str, path: str = "labels.csv") -> np.ndarray:
    labels = []
    for ln, l in _lines(text):
        try:
            y = int(l)
        except ValueError:
            raise DatasetFormatError(f"label is not an integer: {l!r}", path, ln)
        if y < 0:
            raise DatasetFormatError(f"negative label {y}", path, ln)
        labels.append(y)
    return np.array(labels, dtype=np.int64)


def parse_split(text: str, path: str = "split.json") -> Dict[str, np.ndarray]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as xc:
        raise DatasetFormatError(f"invalid JSON ({xc.msg})", path, xc.lineno)

    if not isinstance(data, dict):
        raise DatasetFormatError("split must be a JSON object", path)

    split = {}
    for k in ("train", "val", "test"):
        v = data.get(k, [])
        if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
            raise DatasetFormatError(f"'{k}' must be a list of integers", path)
        split[k] = np.array(v, dtype=np.int64)
    return split


def format_edges(edges) -> str:
    return "".join(f"{i},{j}\n" for i, j in edges)


def format_features(X: np.ndarray) -> str:
    # repr of a float round-trips exactly
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in X)


def format_labels(Y: np.ndarray) -> str:
    return "".join(f"{int(y)}\n" for y in Y)
