"""
    Property checks backing the kernel theory, run on freshly drawn random
    instances. Each check draws from its own generator spawned from one base
    seed, so a failing run can be replayed from the printed seed.
"""
from __future__ import annotations
from dataclasses import dataclass, asdict
from typing import Callable, Dict, List
import traceback

import numpy as np

from .dtypes import Graph
from .errors import ConfigError
from .kernels import (
    cheb_partial,
    cheb_series_closed_form,
    cheb_series_partial,
    detect_self_smoothing,
    eigenvalue_map_poisson,
    expand_multiset,
    expected_adjacency,
    expected_laplacian_hat,
    kernel_poisson,
    kernel_smoothing_limit,
    smallgap_spectrum_closed_form,
)
from .math import eigh, eigvalsh, matrix_power, apply_spectral_function, numeric_rank, solve_spd
from .models import gcn_backward, gcn_forward, masked_cross_entropy, sgc_forward
from .synth import SbmConfig, generate, make_split
from ._logging import get_logger, silenced
from .utils import WCTimer

log = get_logger(__name__)


@dataclass
class CheckResult:
    name: str
    description: str
    passed: bool
    observed: float
    bound: float
    trials: int
    detail: str = ""
    seconds: float = 0.0
    theorem: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CheckEntry:
    description: str
    theorem: str
    fx: Callable[[np.random.Generator], CheckResult]


CHECKS: Dict[str, CheckEntry] = {}


def check(name: str, description: str, theorem: str):
    """Register a check under a short id, a one-line property and the result it backs"""

    def deco(fx):
        CHECKS[name] = CheckEntry(description, theorem, fx)
        return fx

    return deco


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    iu, ju = np.triu_indices(n, k=1)
    hit = rng.random(len(iu)) < p
    return Graph(n, zip(iu[hit].tolist(), ju[hit].tolist()))


def random_connected_sbm(rng: np.random.Generator, n_lo: int, n_hi: int, rho_min: float) -> Graph:
    """Two-block SBM graph with density >= rho_min, redrawn until connected"""
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        n1 = int(rng.integers(1, n))
        p = rng.uniform(rho_min, 0.9)
        q = rng.uniform(max(p / 2, 2 * rho_min - p), p)
        cfg = SbmConfig((n1, n - n1), p, q, feature_dim=2, seed=int(rng.integers(2**63)))
        with silenced("kernli.synth"):
            g = generate(cfg).graph
        if g.is_connected():
            return g


def random_components_graph(rng: np.random.Generator) -> Graph:
    """Disjoint union of 1-4 random blocks, some possibly single nodes"""
    sizes = rng.integers(1, 15, size=int(rng.integers(1, 5)))
    edges, off = [], 0
    for s in sizes:
        iu, ju = np.triu_indices(int(s), k=1)
        hit = rng.random(len(iu)) < rng.uniform(0.2, 0.8)
        edges += [(off + int(i), off + int(j)) for i, j in zip(iu[hit], ju[hit])]
        off += int(s)
    return Graph(off, edges)


def _result(worst, bound, trials, detail="", ok=None) -> CheckResult:
    """Name and description are filled in by run_suite"""
    passed = bool(worst <= bound) if ok is None else bool(ok)
    return CheckResult("", "", passed, float(worst), float(bound), trials, detail)


@check(
    "degree-eigenvector",
    "degree vector is an eigenvector with eigenvalue 1",
    theorem="degree eigenvector lemma",
)
def check_degree_eigenvector(rng):
    worst = 0.0
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(1, 101)), rng.uniform(0.0, 0.5))
        u = g.degrees(with_self_loops=True).sqrt()
        worst = max(worst, float(np.max(np.abs(g.laplacian_hat() @ u - u))))
    return _result(worst, 1e-10, 100)


@check(
    "spectrum-range",
    "renormalized Laplacian spectrum lies in (-1, 1]",
    theorem="spectral range lemma",
)
def check_spectrum_range(rng):
    worst_top = 0.0
    lowest = 1.0
    for _ in range(100):
        g = random_graph(rng, int(rng.integers(1, 101)), rng.uniform(0.0, 0.5))
        w = eigvalsh(g.laplacian_hat())
        worst_top = max(worst_top, abs(w[-1] - 1.0))
        lowest = min(lowest, float(w[0]))
    return _result(
        worst_top, 1e-9, 100, f"lowest eigenvalue {lowest:.12f}",
        ok=(worst_top <= 1e-9 and lowest > -1.0 + 1e-9),
    )


@check(
    "oversmoothing-limit",
    "powers of the Laplacian converge to the smoothing limit",
    theorem="over-smoothing limit theorem",
)
def check_oversmoothing_limit(rng):
    worst = 0.0
    for _ in range(20):
        g = random_connected_sbm(rng, 20, 100, 0.3)
        diff = matrix_power(g.laplacian_hat(), 512) - kernel_smoothing_limit(g)
        worst = max(worst, float(np.max(np.abs(diff))))
    return _result(worst, 1e-8, 20)


@check(
    "limit-idempotent",
    "smoothing limit is idempotent with trace = rank = components",
    theorem="over-smoothing limit theorem",
)
def check_limit_idempotent(rng):
    worst = 0.0
    mismatch = ""
    for _ in range(50):
        g = random_components_graph(rng)
        rep = detect_self_smoothing(kernel_smoothing_limit(g))
        k = len(g.connected_components())
        worst = max(worst, rep.idempotency_defect)
        if not (int(round(rep.trace)) == rep.rank == k) and not mismatch:
            mismatch = f"trace {rep.trace:.6f}, rank {rep.rank}, components {k}"
    return _result(worst, 1e-10, 50, mismatch, ok=(worst <= 1e-10 and not mismatch))


@check(
    "limit-projection",
    "smoothing limit projects features onto the degree direction",
    theorem="over-smoothing limit theorem",
)
def check_limit_projection(rng):
    worst = 0.0
    for _ in range(30):
        g = random_connected_sbm(rng, 10, 60, 0.3)
        S = kernel_smoothing_limit(g)
        u = g.degrees(with_self_loops=True).sqrt()
        X = rng.standard_normal((g.n, 3))
        SX = S @ X
        worst = max(worst, float(np.max(np.abs(SX - S @ SX))))
        for col in SX.T:
            nc = np.linalg.norm(col)
            if nc > 1e-12:
                cos = abs(col @ u) / (nc * np.linalg.norm(u))
                worst = max(worst, 1.0 - cos)
    return _result(worst, 1e-10, 30)


@check(
    "chebyshev-tail",
    "Chebyshev partial sums obey the geometric tail bound",
    theorem="Chebyshev tail bound theorem",
)
def check_chebyshev_tail(rng):
    worst_ratio = 0.0
    detail = ""
    radii = (-0.5, -0.3, 0.3, 0.5, 0.9)
    orders = (1, 2, 4, 8, 16, 32)
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 41)), rng.uniform(0.05, 0.5))
        L = g.laplacian_hat()
        for r in radii:
            P = kernel_poisson(L, r)
            for K in orders:
                gap = np.linalg.norm(cheb_partial(L, r, K) - P, 2)
                bound = 2 * abs(r) ** (K + 1) / (1 - abs(r)) + 1e-10
                ratio = gap / bound
                if ratio > worst_ratio:
                    worst_ratio = ratio
                    detail = f"r={r}, K={K}: gap {gap:.3e} vs bound {bound:.3e}"
    return _result(worst_ratio, 1.0, 50 * len(radii) * len(orders), detail)


@check(
    "poisson-range",
    "Poisson kernel spectrum stays away from 0",
    theorem="Poisson spectral mapping",
)
def check_poisson_range(rng):
    worst = 0.0
    detail = ""
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(1, 61)), rng.uniform(0.0, 0.5))
        r = float(rng.choice([-0.9, -0.5, 0.3, 0.5, 0.9]))
        lo = (1 - abs(r)) / (1 + abs(r)) - 1e-8
        hi = (1 + abs(r)) / (1 - abs(r)) + 1e-8
        w = eigvalsh(kernel_poisson(g.laplacian_hat(), r))
        out = max(lo - w[0], w[-1] - hi, 0.0)
        if out > 0 and not detail:
            detail = f"r={r}: eigenvalues in [{w[0]:.6g}, {w[-1]:.6g}]"
        if np.min(np.abs(w)) < 1e-6:
            out = max(out, 1.0)
            detail = detail or f"r={r}: eigenvalue within 1e-6 of 0"
        worst = max(worst, out)
    return _result(worst, 0.0, 30, detail)


@check(
    "poisson-mapping",
    "Poisson eigenvalues are the mapped Laplacian eigenvalues",
    theorem="Poisson spectral mapping",
)
def check_poisson_mapping(rng):
    worst = 0.0
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(1, 61)), rng.uniform(0.0, 0.5))
        r = float(rng.uniform(-0.9, 0.9))
        L = g.laplacian_hat()
        mapped = np.sort(eigenvalue_map_poisson(eigvalsh(L), r))
        actual = eigvalsh(kernel_poisson(L, r))
        worst = max(worst, float(np.max(np.abs(mapped - actual))))
        P = kernel_poisson(L, r)
        worst = max(worst, float(np.max(np.abs(P @ L - L @ P))))
    return _result(worst, 1e-8, 30)


@check(
    "half-series",
    "half-coefficient Chebyshev series matches its closed form",
    theorem="Chebyshev generating function identity",
)
def check_half_series(rng):
    worst = 0.0
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(1, 41)), rng.uniform(0.05, 0.5))
        r = float(rng.uniform(-0.8, 0.8))
        L = g.laplacian_hat()
        C = cheb_series_closed_form(L, r)
        worst = max(worst, float(np.max(np.abs(2 * C - np.eye(g.n) - kernel_poisson(L, r)))))
        K = 60
        tail = abs(r) ** (K + 1) / (1 - abs(r))
        gap = np.linalg.norm(cheb_series_partial(L, r, K) - C, 2)
        worst = max(worst, gap - tail)
    return _result(worst, 1e-10, 20)


@check(
    "sbm-closed-form",
    "expected block-model spectrum matches the closed form",
    theorem="two-block expected spectrum",
)
def check_closed_form_spectrum(rng):
    worst = 0.0
    cases = [(int(rng.integers(1, 30)), int(rng.integers(1, 30)), *sorted(rng.uniform(0.01, 1.0, 2))[::-1]) for _ in range(20)]
    cases += [(15, 15, 1.0, 1.0), (10, 25, 0.4, 0.4)]
    for n1, n2, p, q in cases:
        closed = expand_multiset(smallgap_spectrum_closed_form(n1, n2, p, q))
        numeric = eigvalsh(expected_laplacian_hat(n1, n2, p, q))
        worst = max(worst, float(np.max(np.abs(closed - numeric))))

    # equal densities collapse to two values
    N, rho = 35, 0.4
    lim = smallgap_spectrum_closed_form(10, 25, rho, rho)
    target = (1 - rho) / (1 + (N - 1) * rho)
    worst = max(worst, abs(lim[0][0] - target), float(lim[0][1] != N - 1))
    return _result(worst, 1e-8, len(cases) + 1)


@check(
    "eigh",
    "eigendecomposition is orthonormal and reconstructs",
    theorem="numerics contract",
)
def check_eigh(rng):
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 65))
        B = rng.standard_normal((n, n))
        M = B + B.T
        s = eigh(M)
        U = s.eigenvectors
        worst = max(worst, float(np.max(np.abs(U.T @ U - np.eye(n)))))
        rec = np.max(np.abs(M - s.reconstruct())) / np.max(np.abs(M))
        worst = max(worst, float(rec))
    return _result(worst, 1e-8, 50)


@check(
    "cholesky-solve",
    "Cholesky solve leaves a small residual",
    theorem="numerics contract",
)
def check_solve(rng):
    worst = 0.0
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(1, 65)), rng.uniform(0.0, 0.5))
        r = float(rng.uniform(-0.95, 0.95))
        M = (r * r + 1) * np.eye(g.n) - 2 * r * g.laplacian_hat()
        B = rng.standard_normal((g.n, 3))
        X = solve_spd(M, B)
        worst = max(worst, float(np.max(np.abs(M @ X - B)) / np.max(np.abs(B))))
    return _result(worst, 1e-8, 50)


@check(
    "matrix-power",
    "matrix powers agree with the spectral power",
    theorem="numerics contract",
)
def check_powers(rng):
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(1, 40))
        B = rng.standard_normal((n, n))
        M = B + B.T
        M /= max(np.max(np.abs(np.linalg.eigvalsh(M))), 1e-12) / 1.3
        s = eigh(M)
        for k in range(17):
            Mk = matrix_power(M, k)
            Sk = apply_spectral_function(s, lambda x: x**k)
            worst = max(worst, float(np.max(np.abs(Mk - Sk)) / max(np.max(np.abs(Mk)), 1e-300)))
    return _result(worst, 1e-7, 30)


def _gcn_loss(F, X, W0, W1, Y, mask):
    logits, _ = gcn_forward(F, X, W0, W1)
    return masked_cross_entropy(logits, Y, mask)[0]


def random_gcn_instance(rng: np.random.Generator):
    """Small GCN problem whose pre-activations stay clear of the ReLU kink"""
    n = int(rng.integers(2, 13))
    d, h, C = int(rng.integers(1, 6)), int(rng.integers(1, 5)), int(rng.integers(2, 4))
    F = random_graph(rng, n, 0.4).laplacian_hat()
    X = rng.standard_normal((n, d))
    Y = rng.integers(0, C, size=n)
    mask = rng.random(n) < 0.6
    mask[0] = True
    while True:
        W0 = rng.standard_normal((d, h))
        W1 = rng.standard_normal((h, C))
        _, cache = gcn_forward(F, X, W0, W1)
        if np.min(np.abs(cache.Z1)) > 1e-4:
            return F, X, W0, W1, Y, mask


@check(
    "gcn-gradients",
    "GCN gradients match central finite differences",
    theorem="backpropagation identity",
)
def check_gradients(rng):
    worst = 0.0
    step = 1e-5
    for _ in range(20):
        F, X, W0, W1, Y, mask = random_gcn_instance(rng)
        logits, cache = gcn_forward(F, X, W0, W1)
        _, dlogits = masked_cross_entropy(logits, Y, mask)
        analytic = gcn_backward(cache, dlogits)

        for which, W in enumerate((W0, W1)):
            num = np.zeros_like(W)
            for idx in np.ndindex(W.shape):
                Wp, Wm = W.copy(), W.copy()
                Wp[idx] += step
                Wm[idx] -= step
                args_p = (Wp, W1) if which == 0 else (W0, Wp)
                args_m = (Wm, W1) if which == 0 else (W0, Wm)
                num[idx] = (_gcn_loss(F, X, *args_p, Y, mask) - _gcn_loss(F, X, *args_m, Y, mask)) / (2 * step)
            a = analytic[which]
            scale = max(np.linalg.norm(a), np.linalg.norm(num), 1e-8)
            worst = max(worst, float(np.linalg.norm(a - num) / scale))
    return _result(worst, 1e-5, 20)


@check(
    "self-smoothing-collapse",
    "self-smoothing kernel confines network outputs",
    theorem="self-smoothing collapse theorem",
)
def check_collapse(rng):
    worst = 0.0
    detail = ""
    g = random_components_graph(rng)
    S = kernel_smoothing_limit(g)
    rank_S = numeric_rank(S)
    X = rng.standard_normal((g.n, 5))
    for _ in range(10):
        W0 = rng.standard_normal((5, 4))
        W1 = rng.standard_normal((4, 3))
        logits, _ = gcn_forward(S, X, W0, W1)
        excess = numeric_rank(logits) - rank_S
        if excess > 0 and not detail:
            detail = f"logits rank exceeds rank(S) = {rank_S} by {excess}"
        worst = max(worst, excess)

        W = rng.standard_normal((5, 3))
        base = sgc_forward(S, 1, X, W)
        for k in (2, 5):
            worst = max(worst, float(np.max(np.abs(sgc_forward(S, k, X, W) - base)) > 1e-10))
    return _result(worst, 0.0, 10, detail)


@check(
    "sbm-bernoulli",
    "generated edges are Bernoulli with the block probabilities",
    theorem="block model edge law",
)
def check_bernoulli(rng):
    trials = 2000
    p, q = 0.3, 0.1
    sizes = (3, 3)
    acc = np.zeros((6, 6))
    base = int(rng.integers(2**62))
    with silenced("kernli.synth"):
        for t in range(trials):
            g = generate(SbmConfig(sizes, p, q, feature_dim=2, seed=base + t)).graph
            acc += g.adjacency(with_self_loops=True)
    mean = acc / trials
    worst = max(abs(mean[0, 1] - p), abs(mean[0, 3] - q))
    worst_mc = float(np.max(np.abs(mean - expected_adjacency(3, 3, p, q))))
    return _result(
        max(worst / 0.05, worst_mc / (4 / np.sqrt(trials))), 1.0, trials,
        f"pair frequencies {mean[0, 1]:.3f} (p={p}), {mean[0, 3]:.3f} (q={q})",
    )


@check(
    "split-proportions",
    "stratified split keeps class proportions",
    theorem="stratified split invariant",
)
def check_split(rng):
    worst = 0.0
    for _ in range(50):
        C = int(rng.integers(2, 5))
        labels = rng.integers(0, C, size=int(rng.integers(20, 300)))
        labels[:C] = np.arange(C)
        fr = (0.1, 0.2, 0.7)
        sp = make_split(len(labels), labels, fr, seed=int(rng.integers(2**32)))
        for c in range(C):
            m = np.sum(labels == c)
            for k, f in zip(("train", "val", "test"), fr):
                got = np.sum(labels[sp[k]] == c)
                worst = max(worst, abs(got - f * m) - 1.0)
    return _result(worst, 0.0, 50)


def run_suite(seed: int, names: List[str] = None) -> List[CheckResult]:
    """
    Run the registered checks (all by default). A check that raises is a failure.
    The generator of each check depends only on `seed` and the check id.
    """
    names = list(CHECKS) if names is None else list(names)
    unknown = [x for x in names if x not in CHECKS]
    if unknown:
        raise ConfigError(f"Unknown checks {unknown}. Available: {list(CHECKS)}")

    streams = dict(zip(CHECKS, np.random.SeedSequence(seed).spawn(len(CHECKS))))

    results = []
    for name in names:
        entry = CHECKS[name]
        rng = np.random.default_rng(streams[name])
        log.debug(f"running check {name}")
        with WCTimer(name) as t:
            try:
                res = entry.fx(rng)
            except Exception as xc:
                res = CheckResult(
                    "", "", False, float("nan"), float("nan"), 0,
                    f"raised {type(xc).__name__}: {xc}\n{traceback.format_exc(limit=3)}",
                )
        res.name, res.description, res.theorem = name, entry.description, entry.theorem
        res.seconds = t.elapsed
        results.append(res)
    return results
