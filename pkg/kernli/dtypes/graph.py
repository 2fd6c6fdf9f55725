from __future__ import annotations
from typing import Iterable, List, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .. import _config
from ..errors import GraphError


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def normalize_adjacency(A_hat: np.ndarray) -> np.ndarray:
    """
    Symmetric normalization D^(-1/2) A D^(-1/2) with D = diag(row sums of A).
    Rows must have positive sums.
    """
    d = A_hat.sum(axis=1)
    if np.any(d <= 0):
        raise GraphError(
            "Cannot normalize: zero row sum", node=int(np.flatnonzero(d <= 0)[0])
        )
    s = 1.0 / np.sqrt(d)
    return s[:, None] * A_hat * s[None, :]


class DegreeVector:
    """
    Degrees of all nodes. With the self-loop convention every degree is count + 1.
    """

    def __init__(self, d: np.ndarray, self_loops: bool):
        self.d = _readonly(np.asarray(d, dtype=np.float64))
        self.self_loops = bool(self_loops)

    def __len__(self):
        return self.d.shape[0]

    def __getitem__(self, i):
        return self.d[i]

    def __array__(self, dtype=None):
        return self.d if dtype is None else self.d.astype(dtype)

    def __repr__(self):
        return f"DegreeVector({self.d.tolist()}, self_loops={self.self_loops})"

    def total(self) -> float:
        return float(self.d.sum())

    def sqrt(self) -> np.ndarray:
        return np.sqrt(self.d)


class Graph:
    """
    Undirected simple graph on nodes 0..n-1, optionally carrying node features and labels.

    Edges are stored once, as sorted pairs (i < j), in lexicographic order.
    Self-loops are never stored; use `with_self_loops=True` where they are needed.
    Instances are immutable: all arrays are read-only.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Tuple[int, int]] = (),
        features: np.ndarray = None,
        labels: np.ndarray = None,
        max_nodes: int = None,
    ):
        cap = _config.get("max_nodes") if max_nodes is None else max_nodes

        if int(n) != n or n < 1:
            raise GraphError(f"Node count must be a positive integer, got {n}")
        if n > cap:
            raise GraphError(f"Graph has {n} nodes, above the node cap of {cap}")

        self.n = int(n)

        pairs = set()
        for e in edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise GraphError(f"Self-pair ({i}, {j}) in the edge set", node=i)
            for x in (i, j):
                if not 0 <= x < n:
                    raise GraphError(f"Edge endpoint {x} out of range [0, {n})", node=x)
            p = (min(i, j), max(i, j))
            if p in pairs:
                raise GraphError(f"Duplicate edge {p}")
            pairs.add(p)

        self.edges: Tuple[Tuple[int, int], ...] = tuple(sorted(pairs))

        if features is not None:
            X = np.array(features, dtype=np.float64)
            if X.ndim != 2 or X.shape[0] != self.n:
                raise GraphError(
                    f"Feature matrix must have {self.n} rows, got shape {X.shape}"
                )
            features = _readonly(X)
        self.features = features

        if labels is not None:
            Y = np.array(labels)
            if Y.shape != (self.n,):
                raise GraphError(f"Label vector must have length {self.n}, got {Y.shape}")
            if not np.issubdtype(Y.dtype, np.integer):
                if not np.all(np.mod(Y, 1) == 0):
                    raise GraphError("Labels must be integers")
            Y = Y.astype(np.int64)
            if np.any(Y < 0):
                raise GraphError("Labels must be non-negative class indices")
            labels = _readonly(Y)
        self.labels = labels

    def __eq__(self, o: Graph) -> bool:
        if not isinstance(o, Graph):
            return NotImplemented
        return (
            self.n == o.n
            and self.edges == o.edges
            and _same_array(self.features, o.features)
            and _same_array(self.labels, o.labels)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            return 0
        return int(self.labels.max()) + 1

    def edge_array(self) -> np.ndarray:
        """(m, 2) integer array of edges"""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(self.edges, dtype=np.int64)

    def with_data(self, features: np.ndarray = None, labels: np.ndarray = None) -> Graph:
        """
        Same structure, new node data
        """
        return Graph(self.n, self.edges, features=features, labels=labels, max_nodes=self.n)

    def adjacency(self, with_self_loops: bool = False) -> np.ndarray:
        """
        Dense symmetric 0/1 adjacency matrix. `with_self_loops` returns A + I.
        """
        A = np.zeros((self.n, self.n))
        e = self.edge_array()
        A[e[:, 0], e[:, 1]] = 1.0
        A[e[:, 1], e[:, 0]] = 1.0
        if with_self_loops:
            A[np.diag_indices(self.n)] = 1.0
        return A

    def degrees(self, with_self_loops: bool = False) -> DegreeVector:
        d = np.zeros(self.n)
        e = self.edge_array()
        np.add.at(d, e[:, 0], 1.0)
        np.add.at(d, e[:, 1], 1.0)
        if with_self_loops:
            d += 1.0
        return DegreeVector(d, with_self_loops)

    def laplacian_hat(self) -> np.ndarray:
        """
        Renormalized Laplacian D^(-1/2) (A + I) D^(-1/2), degrees counted with self-loops.
        """
        return normalize_adjacency(self.adjacency(with_self_loops=True))

    def laplacian_sym(self) -> np.ndarray:
        """
        Symmetric-normalized Laplacian I - D^(-1/2) A D^(-1/2) (no self-loops).
        Undefined when a node is isolated.
        """
        d = self.degrees(with_self_loops=False).d
        if np.any(d == 0):
            node = int(np.flatnonzero(d == 0)[0])
            raise GraphError(
                f"Node {node} is isolated; the symmetric-normalized Laplacian is undefined",
                node=node,
            )
        return np.eye(self.n) - normalize_adjacency(self.adjacency())

    def laplacian_tilde(self) -> np.ndarray:
        """L - I = -D^(-1/2) A D^(-1/2)"""
        return self.laplacian_sym() - np.eye(self.n)

    def component_labels(self) -> np.ndarray:
        """
        Component index of every node; components are numbered by their smallest member.
        """
        e = self.edge_array()
        adj = coo_matrix(
            (np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(self.n, self.n)
        ).tocsr()
        _, raw = _cc(adj, directed=False)

        # renumber in order of first appearance, i.e. by smallest member
        _, first = np.unique(raw, return_index=True)
        order = np.argsort(first)
        remap = np.empty_like(order)
        remap[order] = np.arange(len(order))
        return remap[raw]

    def connected_components(self) -> List[Tuple[int, ...]]:
        """
        Partition of the nodes into connected components,
        sorted by smallest member, members ascending.
        """
        lab = self.component_labels()
        return [tuple(np.flatnonzero(lab == c).tolist()) for c in range(lab.max() + 1)]

    def is_connected(self) -> bool:
        return int(self.component_labels().max()) == 0

    def summary(self) -> dict:
        return {
            "n": self.n,
            "edges": self.n_edges,
            "components": len(self.connected_components()),
            "mean_degree": 2.0 * self.n_edges / self.n,
            "classes": self.n_classes,
            "feature_dim": 0 if self.features is None else int(self.features.shape[1]),
        }


def _same_array(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a.shape == b.shape and np.array_equal(a, b)
