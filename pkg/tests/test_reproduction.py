"""
Kernel comparison on the synthetic presets, five seeds each.
Only the ordering of kernels is asserted, not exact accuracies.
"""
import numpy as np
import pytest

from kernli import ModelConfig, generate, get_preset, train
from kernli.synth import majority_fraction

SEEDS = range(5)


def mean_accuracy(preset, kernel, arch):
    accs = []
    for s in SEEDS:
        ds = generate(get_preset(preset, s))
        accs.append(train(ds, kernel, ModelConfig(arch=arch, init_seed=s)).test_accuracy)
    return float(np.mean(accs))


@pytest.mark.slow
@pytest.mark.parametrize("arch", ["GCN", "SGC"])
def test_smallgap_ordering(arch):
    poisson = mean_accuracy("smallgap", "poisson:r=0.5", arch)
    linear = mean_accuracy("smallgap", "linear", arch)
    limit = mean_accuracy("smallgap", "limit", arch)
    laplacian = mean_accuracy("smallgap", "laplacian", arch)

    assert poisson >= 0.95
    assert linear >= 0.95
    assert limit <= 0.60
    assert poisson >= laplacian


@pytest.mark.slow
def test_smallratio_beats_majority():
    baseline = majority_fraction(generate(get_preset("smallratio")).labels)
    assert baseline == pytest.approx(0.8)

    poisson = mean_accuracy("smallratio", "poisson:r=0.5", "GCN")
    limit = mean_accuracy("smallratio", "limit", "GCN")
    assert poisson > baseline
    assert poisson > limit
