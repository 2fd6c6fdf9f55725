"""
    Kernel identities, the kernel string grammar and the kernel factory.

    Grammar (comma separated parameters, whitespace ignored):

        laplacian | power:k=<int> | limit | linear | poisson[:r=<float>]
        | cheb:[r=<float>,]K=<int> | chebhalf:[r=<float>,]K=<int> | firstorder
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .. import _config
from .._logging import get_logger
from ..dtypes import Graph
from ..errors import KernelSpecError, NumericsError
from ..math import asymmetry
from .polynomial import (
    kernel_power,
    kernel_linear,
    kernel_first_order,
    cheb_partial,
    cheb_series_partial,
)
from .poisson import kernel_poisson, eigenvalue_map_poisson
from .smoothing import kernel_smoothing_limit

log = get_logger(__name__)

# family -> (parameter names in the string, parameters required)
FAMILIES = {
    "laplacian": ((), ()),
    "power": (("k",), ("k",)),
    "limit": ((), ()),
    "linear": ((), ()),
    "poisson": (("r",), ()),
    "cheb": (("r", "K"), ("K",)),
    "chebhalf": (("r", "K"), ("K",)),
    "firstorder": ((), ()),
}

_USES_K = ("power", "cheb", "chebhalf")
_USES_R = ("poisson", "cheb", "chebhalf")


@dataclass(frozen=True)
class KernelSpec:
    """
    Symbolic kernel identity: family plus its parameters.
    `k` is the power for `power` and the truncation order K for the Chebyshev families.
    """

    family: str
    k: Optional[int] = None
    r: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise KernelSpecError(
                f"Unknown kernel family '{self.family}'", token=self.family
            )

        if self.family in _USES_K:
            if self.k is None or int(self.k) != self.k:
                raise KernelSpecError(f"'{self.family}' needs an integer order", token="k")
            lo = 1 if self.family == "power" else 0
            if self.k < lo:
                raise KernelSpecError(
                    f"'{self.family}' order must be >= {lo}, got {self.k}", token="k"
                )
        elif self.k is not None:
            raise KernelSpecError(f"'{self.family}' takes no order parameter", token="k")

        if self.family in _USES_R:
            if self.r is None:
                object.__setattr__(self, "r", float(_config.get("poisson_r")))
            if not abs(self.r) < 1.0:
                raise KernelSpecError(f"Radius r must satisfy |r| < 1, got {self.r}", token="r")
        elif self.r is not None:
            raise KernelSpecError(f"'{self.family}' takes no radius parameter", token="r")

    def __str__(self):
        return self.to_string()

    def to_string(self) -> str:
        if self.family == "power":
            return f"power:k={self.k}"
        if self.family == "poisson":
            return f"poisson:r={self.r:g}"
        if self.family in ("cheb", "chebhalf"):
            return f"{self.family}:r={self.r:g},K={self.k}"
        return self.family

    @property
    def is_spectral(self) -> bool:
        """True when the kernel is a scalar function of the renormalized Laplacian"""
        return self.family != "firstorder"


def parse_kernel(s: str) -> KernelSpec:
    """
    Parse a kernel string such as "poisson:r=0.5" or "cheb:r=0.3,K=8"
    """
    if not isinstance(s, str) or not s.strip():
        raise KernelSpecError("Empty kernel string", token=str(s))

    text = "".join(s.split())
    family, _, params = text.partition(":")

    if family not in FAMILIES:
        raise KernelSpecError(f"Unknown kernel family '{family}' in '{s}'", token=family)

    allowed, required = FAMILIES[family]
    values = {}

    if params:
        for tok in params.split(","):
            key, eq, val = tok.partition("=")
            if not eq or key not in allowed:
                raise KernelSpecError(f"Unexpected parameter '{tok}' in '{s}'", token=tok)
            if key in values:
                raise KernelSpecError(f"Repeated parameter '{key}' in '{s}'", token=tok)
            try:
                values[key] = float(val) if key == "r" else int(val)
            except ValueError:
                raise KernelSpecError(f"Bad value for '{key}' in '{s}'", token=tok)
    elif text.endswith(":"):
        raise KernelSpecError(f"Missing parameters after ':' in '{s}'", token=text)

    for key in required:
        if key not in values:
            raise KernelSpecError(f"'{family}' requires parameter '{key}'", token=family)

    return KernelSpec(family, k=values.get("k", values.get("K")), r=values.get("r"))


def as_spec(kernel) -> KernelSpec:
    if isinstance(kernel, KernelSpec):
        return kernel
    return parse_kernel(kernel)


def eigenvalue_map(spec: KernelSpec) -> Callable[[np.ndarray], np.ndarray]:
    """
    Scalar map f with kernel = U f(diag(lambda)) U^T, lambda the eigenvalues
    of the renormalized Laplacian. Works elementwise on arrays.
    """
    spec = as_spec(spec)
    fam = spec.family

    if not spec.is_spectral:
        raise KernelSpecError(
            f"'{fam}' is not a function of the renormalized Laplacian's eigenvalues",
            token=fam,
        )

    if fam == "laplacian":
        return lambda x: np.asarray(x, dtype=np.float64)
    if fam == "power":
        return lambda x: np.asarray(x, dtype=np.float64) ** spec.k
    if fam == "limit":
        return lambda x: np.where(np.abs(np.asarray(x) - 1.0) <= 1e-9, 1.0, 0.0)
    if fam == "linear":
        return lambda x: 0.5 * (1.0 + np.asarray(x, dtype=np.float64))
    if fam == "poisson":
        return lambda x: eigenvalue_map_poisson(x, spec.r)
    if fam == "cheb":
        c = np.concatenate([[1.0], 2.0 * spec.r ** np.arange(1, spec.k + 1)])
        return lambda x: npcheb.chebval(np.asarray(x, dtype=np.float64), c)
    if fam == "chebhalf":
        c = spec.r ** np.arange(spec.k + 1)
        return lambda x: npcheb.chebval(np.asarray(x, dtype=np.float64), c)

    raise KernelSpecError(f"No eigenvalue map for kernel family '{fam}'", token=fam)


def build_kernel(g: Graph, spec) -> np.ndarray:
    """
    Materialize the dense kernel matrix of `spec` on graph `g`
    """
    spec = as_spec(spec)
    fam = spec.family
    log.debug(f"Building kernel {spec} on {g!r}")

    if fam == "limit":
        F = kernel_smoothing_limit(g)
    elif fam == "firstorder":
        F = kernel_first_order(g)
    else:
        L = g.laplacian_hat()
        if fam == "laplacian":
            F = L
        elif fam == "power":
            F = kernel_power(L, spec.k)
        elif fam == "linear":
            F = kernel_linear(L)
        elif fam == "poisson":
            F = kernel_poisson(L, spec.r)
        elif fam == "cheb":
            F = cheb_partial(L, spec.r, spec.k)
        else:
            F = cheb_series_partial(L, spec.r, spec.k)

    a = asymmetry(F)
    if a > _config.get("symmetry_tol") * max(1.0, float(np.max(np.abs(F)))):
        raise NumericsError(f"Kernel {spec} came out asymmetric ({a:.3e})", asymmetry=a)

    return 0.5 * (F + F.T)
