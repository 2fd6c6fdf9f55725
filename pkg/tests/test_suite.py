import numpy as np
import pytest

from kernli import Graph
from kernli.dtypes import normalize_adjacency
from kernli.errors import ConfigError
from kernli.suite import CHECKS, run_suite


@pytest.fixture(scope="module")
def results():
    return run_suite(2024)


class TestSuite:
    def test_every_check_passes(self, results):
        failed = [(r.name, r.observed, r.bound, r.detail) for r in results if not r.passed]
        assert failed == []

    def test_all_checks_ran(self, results):
        assert [r.name for r in results] == list(CHECKS)
        assert all(r.description and r.trials > 0 for r in results)

    def test_every_check_names_its_theorem(self, results):
        assert all(entry.theorem for entry in CHECKS.values())
        by_name = {r.name: r.theorem for r in results}
        assert by_name["degree-eigenvector"] == "degree eigenvector lemma"
        assert by_name["chebyshev-tail"] == "Chebyshev tail bound theorem"
        assert by_name["poisson-mapping"] == "Poisson spectral mapping"
        assert all(r.theorem == CHECKS[r.name].theorem for r in results)

    def test_replay_is_exact(self, results):
        names = ["degree-eigenvector", "chebyshev-tail", "sbm-closed-form"]
        again = run_suite(2024, names)
        before = {r.name: r.observed for r in results}
        for r in again:
            assert r.observed == before[r.name]

    def test_subset_does_not_shift_streams(self):
        alone = run_suite(7, ["poisson-mapping"])[0]
        pair = run_suite(7, ["eigh", "poisson-mapping"])[1]
        assert alone.observed == pair.observed

    def test_unknown_check(self):
        with pytest.raises(ConfigError):
            run_suite(0, ["no-such-check"])


class TestInjectedFault:
    def test_laplacian_without_self_loops_is_caught(self, monkeypatch):
        monkeypatch.setattr(Graph, "laplacian_hat", lambda g: normalize_adjacency(g.adjacency()))
        (res,) = run_suite(0, ["degree-eigenvector"])
        assert not res.passed
        assert res.detail or res.observed > res.bound

    def test_broken_gradient_is_caught(self, monkeypatch):
        import kernli.suite as suite

        real = suite.gcn_backward
        monkeypatch.setattr(suite, "gcn_backward", lambda cache, dl: tuple(2 * g for g in real(cache, dl)))
        (res,) = run_suite(0, ["gcn-gradients"])
        assert not res.passed
        assert res.observed > 0.1
