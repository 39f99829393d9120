"""MLP, 集成结构视图, 参数预算与检查点"""

import numpy as np
import pytest

from src.getain.autodiff import Tape, ops
from src.getain.common.config import load_config
from src.getain.common.cons import Activation, OutputActivation, SharingMode
from src.getain.common.exceptions import ContractError, DimensionError
from src.getain.common.settings import CONFIGS_DIR
from src.getain.networks import (
    EnsembleModel,
    MlpSpec,
    ParamVector,
    bind_params,
    cgan_member,
    conditional_network,
    dcgan_param_count,
    equivalent_spec,
    equivalent_width,
    forward,
    forward_critic,
    gmgan_member,
    gmgan_spec,
    init_params,
    load_checkpoint,
    param_count,
    save_checkpoint,
    tied_model,
)

from .conftest import fd_gradient, rel_error


def _onehot(k: int, K: int, n: int) -> np.ndarray:
    y = np.zeros((n, K))
    y[:, k] = 1.0
    return y


class TestMlp:
    def test_param_count(self):
        assert param_count(MlpSpec((2, 8, 2))) == 42
        assert param_count(MlpSpec((3, 1))) == 4

    def test_spec_validation(self):
        with pytest.raises(ContractError):
            MlpSpec((2,))
        with pytest.raises(ContractError):
            MlpSpec((2, 0, 2))

    def test_spec_text(self):
        spec = MlpSpec((2, 16, 16, 1), Activation.LEAKY_RELU, OutputActivation.SIGMOID, 0.1)
        assert MlpSpec.from_text(spec.to_text()) == spec

    def test_zero_params_give_zero_output(self):
        theta = ParamVector.zeros(MlpSpec((2, 8, 2)))
        np.testing.assert_array_equal(forward(theta, np.ones((4, 2))), np.zeros((4, 2)))

    def test_sigmoid_head_with_zero_params(self):
        theta = ParamVector.zeros(MlpSpec((2, 8, 1), output_activation=OutputActivation.SIGMOID))
        np.testing.assert_allclose(forward_critic(theta, np.ones((3, 2))), 0.5)

    def test_identity_layer(self):
        spec = MlpSpec((2, 2))
        theta = ParamVector.from_layers([(np.eye(2), np.zeros(2))], spec)
        x = np.random.default_rng(0).normal(size=(5, 2))
        np.testing.assert_array_equal(forward(theta, x), x)

    def test_matches_hand_written_forward(self):
        spec = MlpSpec((2, 16, 2), Activation.TANH)
        theta = init_params(spec, np.random.default_rng(3))
        x = np.random.default_rng(4).normal(size=(10, 2))
        (w1, b1), (w2, b2) = theta.layers()
        expected = np.tanh(x @ w1 + b1) @ w2 + b2
        np.testing.assert_allclose(forward(theta, x), expected, atol=1e-12)

    def test_input_width_checked(self):
        theta = ParamVector.zeros(MlpSpec((2, 4, 2)))
        with pytest.raises(DimensionError):
            forward(theta, np.ones((3, 3)))

    def test_critic_must_be_scalar(self):
        with pytest.raises(DimensionError):
            forward_critic(ParamVector.zeros(MlpSpec((2, 4, 2))), np.ones((1, 2)))

    def test_vector_length_checked(self):
        with pytest.raises(DimensionError):
            ParamVector(np.zeros(5), MlpSpec((2, 2)))

    def test_init_is_seeded(self):
        spec = MlpSpec((2, 8, 2))
        a = init_params(spec, np.random.default_rng(7))
        b = init_params(spec, np.random.default_rng(7))
        assert a == b
        assert np.all(np.abs(a.layers()[0][0]) <= 1.0 / np.sqrt(2))


class TestTapeNetwork:
    @pytest.mark.parametrize("kind", [Activation.TANH, Activation.RELU, Activation.LEAKY_RELU])
    def test_tape_matches_numpy(self, kind):
        spec = MlpSpec((2, 8, 8, 1), kind, OutputActivation.SIGMOID)
        theta = init_params(spec, np.random.default_rng(1))
        x = np.random.default_rng(2).normal(size=(6, 2))
        tape = Tape()
        _, net = bind_params(tape, theta)
        np.testing.assert_allclose(net(tape.constant(x)).value, forward(theta, x), atol=1e-14)

    def test_gradient_matches_finite_differences(self):
        spec = MlpSpec((2, 6, 1), Activation.TANH)
        theta = init_params(spec, np.random.default_rng(5))
        x = np.random.default_rng(6).normal(size=(8, 2))

        tape = Tape()
        leaf, net = bind_params(tape, theta)
        grads = tape.backward(ops.mean(net(tape.constant(x))))

        def f(v):
            return float(forward(theta.with_values(v), x).mean())

        assert rel_error(grads[leaf], fd_gradient(f, theta.values)) < 1e-5


class TestConditionalView:
    def _shared(self, seed: int):
        rng = np.random.default_rng(seed)
        g = init_params(MlpSpec((2, 8, 2), Activation.RELU), rng)
        d = init_params(MlpSpec((2, 8, 1), Activation.RELU), rng)
        return g, d, rng.normal(size=(8, 3)), rng.normal(size=(8, 3))

    def test_zero_bias_matrix_is_shared_network(self):
        g, d, _, _ = self._shared(0)
        values = g.values.copy()
        values[g.spec.first_bias_slice()] = 0.0
        g = g.with_values(values)
        member_g, _ = cgan_member(g, d, np.zeros((8, 3)), np.zeros((8, 3)), 1)
        z = np.random.default_rng(1).normal(size=(5, 2))
        np.testing.assert_array_equal(forward(member_g, z), forward(g, z))

    @pytest.mark.parametrize("k", range(3))
    def test_member_equals_concatenated_input(self, k):
        g, d, Bg, Bd = self._shared(k + 10)
        member_g, member_d = cgan_member(g, d, Bg, Bd, k)
        z = np.random.default_rng(k).normal(size=(20, 2))
        x = np.random.default_rng(k + 1).normal(size=(20, 2))

        cond_g = conditional_network(g, Bg)
        cond_d = conditional_network(d, Bd)
        np.testing.assert_allclose(forward(cond_g, np.hstack([z, _onehot(k, 3, 20)])), forward(member_g, z), atol=1e-12)
        np.testing.assert_allclose(forward(cond_d, np.hstack([x, _onehot(k, 3, 20)])), forward(member_d, x), atol=1e-12)

    def test_member_index_checked(self):
        g, d, Bg, Bd = self._shared(0)
        with pytest.raises(ContractError):
            cgan_member(g, d, Bg, Bd, 3)

    def test_bias_matrix_shape(self):
        g, d, _, _ = self._shared(0)
        with pytest.raises(DimensionError):
            cgan_member(g, d, np.zeros((7, 3)), np.zeros((8, 3)), 0)


class TestLatentMixtureView:
    def _identity_tail(self):
        spec = MlpSpec((2, 2))
        return ParamVector.from_layers([(np.eye(2), np.zeros(2))], spec)

    def test_identity_latent_layer_is_tail(self):
        tail = init_params(MlpSpec((2, 8, 2)), np.random.default_rng(0))
        member = gmgan_member(tail, np.eye(2), np.zeros(2), 0)
        assert member.spec == gmgan_spec(tail.spec)
        z = np.random.default_rng(1).normal(size=(10, 2))
        np.testing.assert_allclose(forward(member, z), forward(tail, z), atol=1e-15)

    def test_gaussian_moments(self):
        W = np.array([[2.0, 0.0], [1.0, 1.0]])
        b = np.array([1.0, -1.0])
        member = gmgan_member(self._identity_tail(), W, b, 0)
        n = 100_000
        x = forward(member, np.random.default_rng(0).normal(size=(n, 2)))

        cov = W @ W.T
        np.testing.assert_allclose(cov, [[4.0, 2.0], [2.0, 2.0]])
        se_mean = np.sqrt(np.diag(cov) / n)
        assert np.all(np.abs(x.mean(axis=0) - b) < 3 * se_mean)

        sample_cov = np.cov(x, rowvar=False)
        se_cov = np.sqrt((np.outer(np.diag(cov), np.diag(cov)) + cov**2) / n)
        assert np.all(np.abs(sample_cov - cov) < 3 * se_cov)

    def test_latent_layer_shape(self):
        with pytest.raises(DimensionError):
            gmgan_member(self._identity_tail(), np.eye(3), np.zeros(3), 0)


class TestEnsembleModel:
    def _pair(self, seed=0):
        rng = np.random.default_rng(seed)
        return init_params(MlpSpec((2, 4, 2)), rng), init_params(MlpSpec((2, 4, 1)), rng)

    def test_member_count_checked(self):
        g, d = self._pair()
        with pytest.raises(ContractError):
            EnsembleModel(g.spec, d.spec, SharingMode.INDEPENDENT, [0.5, 0.5], [g], [d])

    def test_weights_checked(self):
        g, d = self._pair()
        with pytest.raises(ContractError):
            tied_model(g, d, [0.7, 0.7])

    def test_tied_members_share_parameters(self):
        g, d = self._pair()
        model = tied_model(g, d, [0.5, 0.25, 0.25])
        assert all(m is g for m in model.member_generators())
        assert model.total_generator_params() == len(g)

    def test_snapshot_is_independent(self):
        g, d = self._pair()
        model = tied_model(g, d, [0.5, 0.5])
        snap = model.snapshot()
        model.generators[0].values[:] = 0.0
        assert not np.array_equal(snap.generators[0].values, model.generators[0].values)


class TestCheckpoint:
    def test_cgan_model_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        g = init_params(MlpSpec((2, 8, 2), Activation.RELU), rng)
        d = init_params(MlpSpec((2, 8, 1), Activation.RELU), rng)
        model = EnsembleModel(
            g.spec,
            d.spec,
            SharingMode.CGAN,
            [0.6, 0.4],
            [g],
            [d],
            bias_g=rng.normal(size=(8, 2)),
            bias_d=rng.normal(size=(8, 2)),
            seed=3,
            meta={"epoch": 200},
        )
        loaded = load_checkpoint(save_checkpoint(model, tmp_path / "m.ckpt"))
        assert loaded.mode is SharingMode.CGAN
        assert loaded.generators[0] == g and loaded.critics[0] == d
        np.testing.assert_array_equal(loaded.bias_g, model.bias_g)
        np.testing.assert_array_equal(loaded.bias_d, model.bias_d)
        np.testing.assert_array_equal(loaded.pi, model.pi)
        assert loaded.seed == 3
        assert loaded.meta["epoch"] == "200"

    def test_gmgan_model_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        tail = init_params(MlpSpec((2, 8, 2)), rng)
        d = init_params(MlpSpec((2, 8, 1)), rng)
        model = EnsembleModel(
            tail.spec,
            d.spec,
            SharingMode.GMGAN,
            [1 / 3, 1 / 3, 1 / 3],
            [tail],
            [d],
            latent_w=rng.normal(size=(3, 2, 2)),
            latent_b=rng.normal(size=(3, 2)),
        )
        loaded = load_checkpoint(save_checkpoint(model, tmp_path / "m.ckpt"))
        for k in range(3):
            assert loaded.member_generator(k) == model.member_generator(k)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "x.ckpt"
        path.write_text("hello\n")
        with pytest.raises(ContractError):
            load_checkpoint(path)


class TestBudget:
    def test_equivalent_width_is_largest_under_budget(self):
        single = MlpSpec((2, 64, 64, 2))
        for K in (2, 3, 10):
            w = equivalent_width(single, K)
            assert K * param_count(single.with_widths(w)) < param_count(single)
            assert K * param_count(single.with_widths(w + 1)) >= param_count(single)

    def test_shipped_equivalent_config_is_under_budget(self):
        single = load_config(CONFIGS_DIR / "baseline_single.ini").network_specs()
        equiv_cfg = load_config(CONFIGS_DIR / "equivalent_ensemble.ini")
        member = equiv_cfg.network_specs()
        K = equiv_cfg.n_components
        for single_spec, member_spec in zip(single, member):
            assert K * param_count(member_spec) < param_count(single_spec)
            assert member_spec == equivalent_spec(single_spec, K)

    def test_dcgan_counts(self):
        assert dcgan_param_count("generator", 64) == 3_576_704
        assert dcgan_param_count("generator", 15) == 312_004
        assert 10 * dcgan_param_count("generator", 15) < dcgan_param_count("generator", 64)
        assert dcgan_param_count("critic", 64) == 2_765_568
        assert dcgan_param_count("critic", 20) == 272_880

    def test_unknown_kind(self):
        with pytest.raises(ContractError):
            dcgan_param_count("encoder", 64)
