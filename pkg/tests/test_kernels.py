import numpy as np
import pytest

from kernli import Graph
from kernli.errors import GraphError, KernelSpecError
from kernli.kernels import (
    KernelSpec,
    build_kernel,
    cheb_partial,
    cheb_series_closed_form,
    cheb_series_partial,
    chebyshev_sum,
    detect_self_smoothing,
    eigenvalue_map,
    eigenvalue_map_poisson,
    expand_multiset,
    expected_laplacian_hat,
    kernel_first_order,
    kernel_linear,
    kernel_poisson,
    kernel_power,
    kernel_smoothing_limit,
    parse_kernel,
    smallgap_spectrum_closed_form,
    spectral_profile,
)
from kernli.math import eigh, eigvalsh, matrix_power, numeric_rank

from conftest import er_graph


def connected_graph(rng, n, p):
    while True:
        g = er_graph(rng, n, p)
        if g.is_connected():
            return g


class TestKernelStrings:
    @pytest.mark.parametrize(
        "text, spec",
        [
            ("laplacian", KernelSpec("laplacian")),
            ("power:k=2", KernelSpec("power", k=2)),
            ("limit", KernelSpec("limit")),
            ("linear", KernelSpec("linear")),
            ("poisson:r=0.3", KernelSpec("poisson", r=0.3)),
            ("poisson", KernelSpec("poisson", r=0.5)),
            ("cheb:r=0.3,K=8", KernelSpec("cheb", k=8, r=0.3)),
            ("cheb:K=4", KernelSpec("cheb", k=4, r=0.5)),
            ("chebhalf: r = -0.2, K = 3", KernelSpec("chebhalf", k=3, r=-0.2)),
            ("firstorder", KernelSpec("firstorder")),
        ],
    )
    def test_parse(self, text, spec):
        assert parse_kernel(text) == spec
        assert parse_kernel(spec.to_string()) == spec

    @pytest.mark.parametrize(
        "text, token",
        [
            ("bogus", "bogus"),
            ("power", "power"),
            ("power:k=two", "k=two"),
            ("poisson:k=2", "k=2"),
            ("poisson:r=0.5,r=0.4", "r=0.4"),
        ],
    )
    def test_bad_token_is_named(self, text, token):
        with pytest.raises(KernelSpecError) as xc:
            parse_kernel(text)
        assert xc.value.token == token

    @pytest.mark.parametrize("text", ["", "poisson:r=1.0", "poisson:r=-1.5", "power:k=0", "cheb:K=-1", "poisson:"])
    def test_invalid(self, text):
        with pytest.raises(KernelSpecError):
            parse_kernel(text)

    def test_first_order_has_no_eigenvalue_map(self):
        spec = parse_kernel("firstorder")
        assert not spec.is_spectral
        assert all(parse_kernel(s).is_spectral for s in ("laplacian", "limit", "poisson", "cheb:K=3"))
        with pytest.raises(KernelSpecError) as xc:
            eigenvalue_map(spec)
        assert xc.value.token == "firstorder"


class TestPolynomialKernels:
    def test_power(self, rng):
        L = er_graph(rng, 20, 0.3).laplacian_hat()
        np.testing.assert_allclose(kernel_power(L, 3), L @ L @ L, atol=1e-14)
        with pytest.raises(KernelSpecError):
            kernel_power(L, 0)

    def test_linear_spectrum_positive(self, rng):
        L = er_graph(rng, 30, 0.2).laplacian_hat()
        w = eigvalsh(kernel_linear(L))
        assert w[0] > 0 and w[-1] <= 1 + 1e-12

    def test_first_order(self, triangle):
        expected = np.eye(3) + 0.5 * (np.ones((3, 3)) - np.eye(3))
        np.testing.assert_allclose(kernel_first_order(triangle), expected)
        with pytest.raises(GraphError):
            kernel_first_order(Graph(3, [(0, 1)]))

    def test_chebyshev_recurrence(self):
        x = np.linspace(-1, 1, 7)
        M = np.diag(x)
        coeffs = [0.3, -1.0, 0.5, 2.0]
        expected = np.polynomial.chebyshev.chebval(x, coeffs)
        np.testing.assert_allclose(np.diag(chebyshev_sum(M, coeffs)), expected, atol=1e-14)

    def test_cheb_order_zero_is_identity(self, rng):
        L = er_graph(rng, 8, 0.4).laplacian_hat()
        np.testing.assert_array_equal(cheb_partial(L, 0.5, 0), np.eye(8))


class TestPoisson:
    @pytest.mark.parametrize("r", [-0.9, -0.3, 0.3, 0.5, 0.9])
    def test_spectral_range(self, rng, r):
        L = er_graph(rng, 40, 0.15).laplacian_hat()
        w = eigvalsh(kernel_poisson(L, r))
        lo, hi = (1 - abs(r)) / (1 + abs(r)), (1 + abs(r)) / (1 - abs(r))
        assert w[0] >= lo - 1e-8
        assert w[-1] <= hi + 1e-8

    def test_eigenvalue_mapping(self, rng):
        L = er_graph(rng, 40, 0.15).laplacian_hat()
        r = 0.7
        mapped = np.sort(eigenvalue_map_poisson(eigvalsh(L), r))
        np.testing.assert_allclose(eigvalsh(kernel_poisson(L, r)), mapped, atol=1e-8)

    def test_map_endpoints(self):
        assert eigenvalue_map_poisson(1.0, 0.5) == pytest.approx(3.0)
        assert eigenvalue_map_poisson(-1.0, 0.5) == pytest.approx(1 / 3)
        assert eigenvalue_map_poisson(0.3, 0.0) == 1.0

    def test_bad_radius(self):
        with pytest.raises(KernelSpecError):
            kernel_poisson(np.eye(2), 1.0)

    @pytest.mark.parametrize("r", [-0.5, 0.3, 0.5, 0.9])
    @pytest.mark.parametrize("K", [1, 2, 4, 8, 16, 32])
    def test_chebyshev_tail_bound(self, rng, r, K):
        for _ in range(5):
            L = er_graph(rng, int(rng.integers(2, 30)), 0.3).laplacian_hat()
            gap = np.linalg.norm(cheb_partial(L, r, K) - kernel_poisson(L, r), 2)
            assert gap <= 2 * abs(r) ** (K + 1) / (1 - abs(r)) + 1e-10

    def test_half_series_closed_form(self, rng):
        L = er_graph(rng, 25, 0.2).laplacian_hat()
        r = 0.4
        C = cheb_series_closed_form(L, r)
        np.testing.assert_allclose(2 * C - np.eye(25), kernel_poisson(L, r), atol=1e-10)
        np.testing.assert_allclose(cheb_series_partial(L, r, 60), C, atol=1e-10)


class TestSmoothingLimit:
    def test_single_edge(self, path2):
        np.testing.assert_allclose(kernel_smoothing_limit(path2), np.full((2, 2), 0.5))

    def test_is_limit_of_powers(self, rng):
        g = connected_graph(rng, 30, 0.4)
        np.testing.assert_allclose(matrix_power(g.laplacian_hat(), 512), kernel_smoothing_limit(g), atol=1e-8)

    def test_block_structure(self):
        g = Graph(5, [(0, 1), (1, 2), (3, 4)])
        S = kernel_smoothing_limit(g)
        assert np.all(S[:3, 3:] == 0)
        d = np.array([2.0, 3.0, 2.0])
        np.testing.assert_allclose(S[:3, :3], np.sqrt(np.outer(d, d)) / 7)

    def test_idempotent_with_trace_rank_components(self, rng):
        g = Graph(7, [(0, 1), (2, 3), (3, 4)])
        rep = detect_self_smoothing(kernel_smoothing_limit(g))
        assert rep.verdict
        assert rep.idempotency_defect <= 1e-10
        assert round(rep.trace) == rep.rank == rep.subspace_dim == len(g.connected_components()) == 4

    def test_projects_onto_degree_direction(self, rng):
        g = connected_graph(rng, 20, 0.3)
        S = kernel_smoothing_limit(g)
        u = g.degrees(with_self_loops=True).sqrt()
        X = rng.standard_normal((20, 4))
        SX = S @ X
        for col in SX.T:
            cos = abs(col @ u) / (np.linalg.norm(col) * np.linalg.norm(u))
            assert cos == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(S @ SX, SX, atol=1e-10)


class TestDetector:
    @pytest.mark.parametrize("kernel", ["laplacian", "power:k=2", "linear", "poisson:r=0.5"])
    def test_non_self_smoothing(self, rng, kernel):
        g = connected_graph(rng, 30, 0.2)
        rep = detect_self_smoothing(build_kernel(g, kernel))
        assert not rep.verdict
        assert rep.subspace_dim == rep.rank

    def test_identity_is_self_smoothing(self):
        rep = detect_self_smoothing(np.eye(5))
        assert rep.verdict and rep.subspace_dim == 5

    def test_profile(self):
        g = Graph(4, [(0, 1), (2, 3)])
        p = spectral_profile(build_kernel(g, "limit"))
        assert p.ones == 2 and p.zeros == 2
        assert spectral_profile(build_kernel(g, "poisson")).zeros == 0


class TestBuildKernel:
    @pytest.mark.parametrize(
        "kernel", ["laplacian", "power:k=3", "linear", "poisson:r=0.5", "cheb:r=0.5,K=6", "chebhalf:r=0.4,K=5"]
    )
    def test_matches_eigenvalue_map(self, rng, kernel):
        g = er_graph(rng, 25, 0.2)
        s = eigh(g.laplacian_hat())
        expected = s.apply(lambda x: float(eigenvalue_map(kernel)(x)))
        np.testing.assert_allclose(build_kernel(g, kernel), expected, atol=1e-9)

    def test_limit_map_on_connected_graph(self, rng):
        g = connected_graph(rng, 25, 0.3)
        s = eigh(g.laplacian_hat())
        expected = s.apply(lambda x: float(eigenvalue_map("limit")(x)))
        np.testing.assert_allclose(build_kernel(g, "limit"), expected, atol=1e-9)

    def test_symmetric(self, rng):
        g = er_graph(rng, 25, 0.2)
        for k in ("laplacian", "limit", "poisson:r=0.9"):
            F = build_kernel(g, k)
            np.testing.assert_array_equal(F, F.T)


class TestSbmSpectrum:
    def test_matches_numeric(self, rng):
        for _ in range(20):
            n1, n2 = rng.integers(1, 30, size=2)
            p, q = sorted(rng.uniform(0.01, 1.0, size=2), reverse=True)
            closed = expand_multiset(smallgap_spectrum_closed_form(n1, n2, p, q))
            np.testing.assert_allclose(closed, eigvalsh(expected_laplacian_hat(n1, n2, p, q)), atol=1e-8)

    def test_fully_connected(self):
        spec = smallgap_spectrum_closed_form(6, 4, 1.0, 1.0)
        assert len(spec) == 2
        assert spec[0][0] == pytest.approx(0.0, abs=1e-12) and spec[0][1] == 9
        assert spec[1] == (1.0, 1)

    def test_equal_densities(self):
        N, rho = 30, 0.2
        spec = smallgap_spectrum_closed_form(12, 18, rho, rho)
        assert spec[0][1] == N - 1
        assert spec[0][0] == pytest.approx((1 - rho) / (1 + (N - 1) * rho), abs=1e-12)

    def test_small_gap_approaches_equal_densities(self):
        N, rho = 30, 0.2
        target = (1 - rho) / (1 + (N - 1) * rho)
        for eps in (1e-2, 1e-4, 1e-6):
            values = expand_multiset(smallgap_spectrum_closed_form(12, 18, rho + eps / 2, rho - eps / 2))
            assert np.max(np.abs(values[:-1] - target)) <= 10 * eps
