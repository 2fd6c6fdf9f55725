import numpy as np
import pytest

from kernli import Graph


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def er_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi graph drawn with `rng`"""
    iu, ju = np.triu_indices(n, k=1)
    hit = rng.random(len(iu)) < p
    return Graph(n, zip(iu[hit].tolist(), ju[hit].tolist()))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def path2():
    return Graph(2, [(0, 1)])


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star3():
    return Graph(3, [(0, 1), (0, 2)])
