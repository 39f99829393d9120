"""
双圆盘基准上的训练实验

都要训练上百到上千步, 标记为 slow。
"""

import numpy as np
import pytest
from scipy.stats import binomtest

from src.getain.common.cons import SharingMode
from src.getain.evaluation import (
    frechet_gaussian,
    model_sampler,
    out_of_support_mass,
    points_oos_mass,
    sample_mixture,
    truncated_sample,
)
from src.getain.networks import equivalent_spec, forward_generator
from src.getain.training import train_cgan, train_ensemble, train_hybrid, train_single

pytestmark = pytest.mark.slow

LAMBDAS = [0.0, 0.001, 0.01, 0.1, 10.0]


def _final_coupling(result) -> float:
    frame = result.frame
    return float(frame.loc[frame["epoch"] == frame["epoch"].max(), "coupling_value"].iloc[0])


def _coupling_curve(result) -> np.ndarray:
    return result.frame.groupby("epoch")["coupling_value"].first().to_numpy()


@pytest.fixture(scope="module")
def hybrid_cfg(reference_config):
    """默认的耦合更新方式 (近端映射), 500 步"""
    return reference_config.with_overrides(mode=SharingMode.L1, epochs=500, eval_interval=50)


@pytest.fixture(scope="module")
def sweep(hybrid_cfg, benchmark_blobs):
    return {lam: train_hybrid(hybrid_cfg, benchmark_blobs, lam) for lam in LAMBDAS}


class TestSupportMass:
    def test_single_leaks_and_ensemble_does_not(self, trained_single, trained_ensemble, benchmark_blobs):
        single = out_of_support_mass(model_sampler(trained_single), benchmark_blobs, n=100_000)
        ensemble = out_of_support_mass(model_sampler(trained_ensemble), benchmark_blobs, n=100_000)
        assert single.low > 0.0
        assert ensemble.high < single.low

    def test_members_stay_on_their_component(self, trained_ensemble, benchmark_blobs):
        z = np.random.default_rng(0).standard_normal((20_000, trained_ensemble.latent_size))
        tau = benchmark_blobs.oos_threshold
        for k, comp in enumerate(benchmark_blobs.components):
            points = forward_generator(trained_ensemble.member_generator(k), z)
            assert np.mean(comp.distances(points) > tau) < 0.05


class TestTruncation:
    def test_cut_latent_region(self, trained_single, benchmark_blobs):
        n = 2000
        out = truncated_sample(
            trained_single.member_generator(0), benchmark_blobs, n, tol=benchmark_blobs.oos_threshold, max_draws=500_000
        )
        assert 0.0 < out.acceptance_rate < 1.0
        assert points_oos_mass(out.points, benchmark_blobs).count == 0
        for count, pi in zip(out.component_counts, benchmark_blobs.pi_true):
            ci = binomtest(int(count), n).proportion_ci(confidence_level=0.99, method="wilson")
            assert ci.low <= pi <= ci.high


class TestCouplingStrength:
    def test_strong_coupling_fuses_generators(self, hybrid_cfg, benchmark_blobs, sweep):
        frozen = hybrid_cfg.with_overrides(epochs=1, eval_interval=1, learning_rate=0.0)
        initial = _final_coupling(train_hybrid(frozen, benchmark_blobs, 10.0))
        assert initial > 0.0

        curve = _coupling_curve(sweep[10.0])
        assert np.all(np.diff(curve) <= 1e-12)
        assert curve[-1] < 0.01 * initial

    def test_coupling_decreases_with_lambda(self, sweep):
        finals = [_final_coupling(sweep[lam]) for lam in LAMBDAS]
        assert all(a >= b for a, b in zip(finals, finals[1:]))


class TestFit:
    def test_one_blob(self, reference_config, one_blob):
        model = train_single(reference_config.with_overrides(epochs=500), one_blob).model
        generated = model_sampler(model)(2000, 0)
        assert frechet_gaussian(one_blob.points, generated) < 0.05

    def test_equivalent_ensemble_not_worse(self, reference_config, trained_single, benchmark_blobs):
        K = benchmark_blobs.K
        cfg = reference_config.with_overrides(
            mode=SharingMode.INDEPENDENT,
            g_spec=equivalent_spec(reference_config.g_spec, K),
            d_spec=equivalent_spec(reference_config.d_spec, K),
        )
        model = train_ensemble(cfg, benchmark_blobs).model
        single = frechet_gaussian(benchmark_blobs.points, model_sampler(trained_single)(2000, 0))
        ensemble = frechet_gaussian(benchmark_blobs.points, model_sampler(model)(2000, 0))
        assert ensemble <= single

    def test_conditional_classes_separate(self, reference_config, benchmark_blobs):
        model = train_cgan(reference_config.with_overrides(mode=SharingMode.CGAN), benchmark_blobs).model
        points, labels = sample_mixture(model, 4000, seed=0)
        assert points[labels == 0, 0].mean() < 0.0 < points[labels == 1, 0].mean()
