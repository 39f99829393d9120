"""共享测试夹具: 两圆盘数据集, 小网络配置, 训练好的单 GAN / 集成"""

import textwrap
from pathlib import Path

import numpy as np
import pytest

from src.getain.common.cons import Activation, OutputActivation, SharingMode, ValueKind
from src.getain.datasets import ComponentSpec, build_dataset
from src.getain.networks import MlpSpec
from src.getain.training import TrainConfig, train_ensemble, train_single

BLOB_SPECS = (ComponentSpec.disk((-3.0, 0.0), 1.0), ComponentSpec.disk((3.0, 0.0), 1.0))


def tiny_config(kind: ValueKind = ValueKind.WASSERSTEIN, **overrides) -> TrainConfig:
    """2-8-2 生成器, 2-8-1 判别器, 几个 epoch"""
    head = OutputActivation.SIGMOID if kind is ValueKind.VANILLA else OutputActivation.NONE
    base = dict(
        g_spec=MlpSpec((2, 8, 2), Activation.TANH),
        d_spec=MlpSpec((2, 8, 1), Activation.TANH, head),
        epochs=5,
        batch_size=16,
        eval_interval=1,
    )
    base.update(overrides)
    return TrainConfig.defaults(kind, **base)


def fd_gradient(f, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """f: ndarray -> float 的中心差分梯度"""
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = x[idx]
        x[idx] = old + h
        up = f(x)
        x[idx] = old - h
        down = f(x)
        x[idx] = old
        grad[idx] = (up - down) / (2 * h)
    return grad


def rel_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-3) -> float:
    analytic = np.asarray(analytic)
    numeric = np.asarray(numeric)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / scale))


@pytest.fixture(scope="session")
def blob_specs():
    return BLOB_SPECS


@pytest.fixture(scope="session")
def two_blobs():
    return build_dataset(BLOB_SPECS, [0.5, 0.5], 1000, seed=0)


@pytest.fixture(scope="session")
def one_blob():
    return build_dataset([ComponentSpec.disk((0.0, 0.0), 1.0)], [1.0], 1000, seed=0)


@pytest.fixture(scope="session")
def reference_config():
    """双圆盘基准上的 WGAN 配置 (2000 步)"""
    return TrainConfig.defaults(
        ValueKind.WASSERSTEIN,
        g_spec=MlpSpec((2, 32, 32, 2), Activation.TANH),
        d_spec=MlpSpec((2, 32, 32, 1), Activation.LEAKY_RELU, leaky_alpha=0.2),
        epochs=2000,
        eval_interval=500,
        seed=0,
    )


@pytest.fixture(scope="session")
def benchmark_blobs():
    return build_dataset(BLOB_SPECS, [0.5, 0.5], 2000, seed=0)


@pytest.fixture(scope="session")
def trained_single(reference_config, benchmark_blobs):
    return train_single(reference_config, benchmark_blobs).model


@pytest.fixture(scope="session")
def trained_ensemble(reference_config, benchmark_blobs):
    cfg = reference_config.with_overrides(mode=SharingMode.INDEPENDENT, workers=2)
    return train_ensemble(cfg, benchmark_blobs).model


SMALL_EXPERIMENT = """
[dataset]
n = 400
seed = 0
pi = 0.5, 0.5

[component.0]
kind = disk
center = -3, 0
radius = 1

[component.1]
kind = disk
center = 3, 0
radius = 1

[model]
mode = {mode}
g_hidden = 8
d_hidden = 8
g_activation = tanh
d_activation = tanh
{model_extra}

[train]
epochs = 4
batch_size = 16
eval_interval = {eval_interval}
seed = 0

[eval]
n_samples = 100
oos_samples = 1000
inversion_targets = 5
inversion_iters = 10
inversion_restarts = 1
"""


@pytest.fixture
def write_config(tmp_path):
    """在临时目录写一个小实验配置, 返回路径"""

    def write(name: str = "exp", mode: str = "single", eval_interval: int = 2, model_extra: str = "") -> Path:
        path = tmp_path / f"{name}.ini"
        text = SMALL_EXPERIMENT.format(mode=mode, eval_interval=eval_interval, model_extra=model_extra)
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return path

    return write
