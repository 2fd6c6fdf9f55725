import numpy as np
import pytest

from kernli import ModelConfig, SbmConfig, TrainReport, build_kernel, generate, train
from kernli.errors import ConfigError, ShapeError
from kernli.math import numeric_rank
from kernli.models import (
    SGD,
    SGCModel,
    Adam,
    evaluate,
    gcn_backward,
    gcn_forward,
    glorot_uniform,
    masked_cross_entropy,
    sgc_forward,
    sgc_propagate,
    standardize_columns,
)
from kernli.synth import preset_smallgap

from conftest import er_graph


def easy_dataset(seed=0):
    return generate(SbmConfig((30, 30), 0.3, 0.02, feature_dim=8, feature_mean_scale=1.0, seed=seed))


def loss_of(F, X, W0, W1, Y, mask):
    return masked_cross_entropy(gcn_forward(F, X, W0, W1)[0], Y, mask)[0]


class TestLoss:
    def test_uniform_logits(self):
        loss, grad = masked_cross_entropy(np.zeros((4, 3)), np.array([0, 1, 2, 0]), [0, 1])
        assert loss == pytest.approx(np.log(3))
        np.testing.assert_array_equal(grad[2:], 0.0)
        np.testing.assert_allclose(grad.sum(axis=1), 0.0, atol=1e-15)

    def test_boolean_mask(self, rng):
        logits = rng.standard_normal((5, 2))
        Y = np.array([0, 1, 1, 0, 1])
        mask = np.array([True, False, True, False, False])
        assert masked_cross_entropy(logits, Y, mask)[0] == masked_cross_entropy(logits, Y, [0, 2])[0]

    def test_gradient(self, rng):
        logits = rng.standard_normal((6, 3))
        Y = rng.integers(0, 3, size=6)
        mask = [0, 2, 3]
        _, grad = masked_cross_entropy(logits, Y, mask)
        h = 1e-6
        num = np.zeros_like(logits)
        for idx in np.ndindex(logits.shape):
            lp, lm = logits.copy(), logits.copy()
            lp[idx] += h
            lm[idx] -= h
            num[idx] = (masked_cross_entropy(lp, Y, mask)[0] - masked_cross_entropy(lm, Y, mask)[0]) / (2 * h)
        np.testing.assert_allclose(grad, num, atol=1e-8)

    def test_empty_mask(self):
        with pytest.raises(ConfigError):
            masked_cross_entropy(np.zeros((3, 2)), np.zeros(3, dtype=int), [])

    def test_evaluate_ties_go_to_lowest_class(self):
        logits = np.array([[1.0, 1.0], [0.0, 2.0]])
        assert evaluate(logits, np.array([0, 1]), [0, 1]) == 1.0
        assert evaluate(logits, np.array([1, 1]), [0, 1]) == 0.5


class TestGCN:
    def test_gradients_match_finite_differences(self, rng):
        checked = 0
        while checked < 10:
            n, d, h, C = 8, 3, 4, 3
            F = er_graph(rng, n, 0.4).laplacian_hat()
            X = rng.standard_normal((n, d))
            Y = rng.integers(0, C, size=n)
            mask = np.flatnonzero(rng.random(n) < 0.6)
            if len(mask) == 0:
                continue
            W0, W1 = rng.standard_normal((d, h)), rng.standard_normal((h, C))
            logits, cache = gcn_forward(F, X, W0, W1)
            if np.min(np.abs(cache.Z1)) <= 1e-4:
                continue

            dW0, dW1 = gcn_backward(cache, masked_cross_entropy(logits, Y, mask)[1])
            for which, (W, dW) in enumerate(((W0, dW0), (W1, dW1))):
                num = np.zeros_like(W)
                for idx in np.ndindex(W.shape):
                    Wp, Wm = W.copy(), W.copy()
                    Wp[idx] += 1e-5
                    Wm[idx] -= 1e-5
                    if which == 0:
                        num[idx] = loss_of(F, X, Wp, W1, Y, mask) - loss_of(F, X, Wm, W1, Y, mask)
                    else:
                        num[idx] = loss_of(F, X, W0, Wp, Y, mask) - loss_of(F, X, W0, Wm, Y, mask)
                num /= 2e-5
                assert np.linalg.norm(dW - num) <= 1e-5 * max(np.linalg.norm(dW), np.linalg.norm(num), 1e-8)
            checked += 1

    def test_forward_shapes(self, rng):
        logits, cache = gcn_forward(np.eye(5), rng.standard_normal((5, 3)), np.ones((3, 2)), np.ones((2, 4)))
        assert logits.shape == (5, 4)
        assert cache.H1.shape == (5, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            gcn_forward(np.eye(5), np.ones((4, 3)), np.ones((3, 2)), np.ones((2, 2)))
        with pytest.raises(ShapeError):
            gcn_forward(np.eye(5), np.ones((5, 3)), np.ones((2, 2)), np.ones((2, 2)))

    def test_stale_cache(self, rng):
        _, cache = gcn_forward(np.eye(5), np.ones((5, 3)), np.ones((3, 2)), np.ones((2, 2)))
        with pytest.raises(ShapeError):
            gcn_backward(cache, np.zeros((4, 2)))

    def test_smoothing_limit_confines_logits(self, rng):
        g = er_graph(rng, 30, 0.05)
        S = build_kernel(g, "limit")
        X = rng.standard_normal((30, 5))
        rank_S = numeric_rank(S)
        assert rank_S == len(g.connected_components())
        for _ in range(10):
            logits, _ = gcn_forward(S, X, rng.standard_normal((5, 4)), rng.standard_normal((4, 3)))
            assert numeric_rank(logits) <= rank_S


class TestSGC:
    def test_propagate(self, rng):
        F = er_graph(rng, 10, 0.3).laplacian_hat()
        X = rng.standard_normal((10, 2))
        np.testing.assert_allclose(sgc_propagate(F, 2, X), F @ F @ X, atol=1e-14)

    @pytest.mark.parametrize("k", [0, -1, 1.5])
    def test_bad_power(self, k):
        with pytest.raises(ConfigError):
            sgc_propagate(np.eye(3), k, np.ones((3, 1)))

    def test_idempotent_kernel_ignores_power(self, rng):
        g = er_graph(rng, 20, 0.2)
        S = build_kernel(g, "limit")
        X, W = rng.standard_normal((20, 4)), rng.standard_normal((4, 2))
        for k in (2, 5):
            np.testing.assert_allclose(sgc_forward(S, k, X, W), sgc_forward(S, 1, X, W), atol=1e-10)

    def test_standardize_columns(self, rng):
        Z = 5.0 + 3.0 * rng.standard_normal((50, 3))
        Z[:, 2] = 4.0
        out = standardize_columns(Z)
        np.testing.assert_allclose(out.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(out.std(axis=0)[:2], 1.0, atol=1e-12)
        np.testing.assert_array_equal(out[:, 2], 0.0)

    @pytest.mark.parametrize("standardize", [True, False])
    def test_prepare(self, standardize):
        ds = easy_dataset()
        F = build_kernel(ds.graph, "poisson:r=0.5")
        model = SGCModel(ModelConfig(arch="SGC", sgc_standardize=standardize))
        model.prepare(F, ds.features)
        FkX = sgc_propagate(F, 2, ds.features)
        expected = standardize_columns(FkX) if standardize else FkX
        np.testing.assert_allclose(model._FkX, expected, atol=1e-12)

    def test_poisson_offset_does_not_blow_up_initial_loss(self):
        rep = train(easy_dataset(), "poisson:r=0.5", ModelConfig(arch="SGC", epochs=1))
        assert rep.initial_loss < 2.0


class TestOptimizers:
    def test_adam_first_step_is_sign(self):
        params = {"W": np.zeros(3)}
        Adam(0.1).step(params, {"W": np.array([2.0, -0.5, 1e-3])})
        np.testing.assert_allclose(params["W"], [-0.1, 0.1, -0.1], rtol=1e-4)

    def test_does_not_mutate_in_place(self):
        W = np.ones(2)
        params = {"W": W}
        SGD(0.5).step(params, {"W": np.ones(2)})
        np.testing.assert_array_equal(W, 1.0)
        np.testing.assert_array_equal(params["W"], 0.5)

    def test_glorot_range(self, rng):
        W = glorot_uniform(rng, 10, 6)
        assert W.shape == (10, 6)
        assert np.max(np.abs(W)) <= np.sqrt(6 / 16)


class TestModelConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"arch": "MLP"},
            {"epochs": -1},
            {"learning_rate": 0.0},
            {"weight_decay": -1e-3},
            {"hidden_dim": 0},
            {"sgc_power": 0},
            {"optimizer": "rmsprop"},
            {"sgc_standardize": "yes"},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            ModelConfig(**kw)

    def test_defaults(self):
        cfg = ModelConfig()
        assert (cfg.arch, cfg.hidden_dim, cfg.epochs, cfg.sgc_power) == ("GCN", 16, 200, 2)
        assert cfg.sgc_standardize is True
        assert ModelConfig(arch="sgc").arch == "SGC"

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            ModelConfig.from_dict({"arch": "GCN", "dropout": 0.5})


class TestTrain:
    def test_zero_epochs(self):
        rep = train(easy_dataset(), "laplacian", ModelConfig(epochs=0))
        assert rep.loss_curve == []
        assert rep.best_epoch == 0
        assert 0.0 <= rep.test_accuracy <= 1.0

    def test_loss_decreases(self):
        rep = train(easy_dataset(), "poisson:r=0.5", ModelConfig(epochs=100))
        assert len(rep.loss_curve) == 100
        assert rep.loss_curve[-1] < rep.initial_loss

    @pytest.mark.parametrize("arch", ["GCN", "SGC"])
    def test_learns_easy_problem(self, arch):
        rep = train(easy_dataset(), "poisson:r=0.5", ModelConfig(arch=arch))
        assert rep.test_accuracy >= 0.9

    def test_smallgap_poisson_improves_on_initialization(self):
        rep = train(generate(preset_smallgap(0)), "poisson:r=0.5", ModelConfig())
        assert rep.best_epoch >= 1
        assert rep.loss_curve[rep.best_epoch - 1] < rep.initial_loss

    def test_deterministic(self):
        cfg = ModelConfig(epochs=20, init_seed=4)
        assert train(easy_dataset(), "linear", cfg) == train(easy_dataset(), "linear", cfg)

    def test_precomputed_kernel(self):
        ds = easy_dataset()
        cfg = ModelConfig(epochs=10)
        F = build_kernel(ds.graph, "linear")
        assert train(ds, "linear", cfg, F=F) == train(ds, "linear", cfg)
        with pytest.raises(ShapeError):
            train(ds, "linear", cfg, F=np.eye(3))

    def test_report_json(self):
        rep = train(easy_dataset(), "power:k=2", ModelConfig(arch="SGC", epochs=5))
        again = TrainReport.from_json(rep.to_json())
        assert again == rep
        assert again.kernel == "power:k=2"
        assert again.model["arch"] == "SGC"
        assert again.dataset["generator"] == "sbm"

    def test_selection_keeps_best_validation_epoch(self):
        ds = easy_dataset()
        rep = train(ds, "laplacian", ModelConfig(epochs=30))
        assert 0 <= rep.best_epoch <= 30
        for k in ("train", "val", "test"):
            assert 0.0 <= rep.accuracy[k] <= 1.0
