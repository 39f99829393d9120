"""
采样器

所有采样器都是 `sampler(n, seed) -> points [n×p]` 形式的可调用对象, 同一 seed 结果相同。
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ..common.cons import STREAM_EVAL
from ..common.exceptions import ContractError, PartialSampleError
from ..datasets.dataset import DisconnectedDataset, distances_to_support
from ..networks.ensemble import EnsembleModel
from ..networks.mlp import ParamVector, forward_generator
from ..utils.logger import get_logger

log = get_logger()

Sampler = Callable[[int, int], np.ndarray]
Generator = Union[ParamVector, Callable[[np.ndarray], np.ndarray]]


def _eval_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), STREAM_EVAL])


def sample_mixture(model: EnsembleModel, n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """k ~ Cat(pi), z ~ N(0, I), x = G_k(z); 返回 (points, member labels)"""
    if n <= 0:
        raise ContractError(f"n must be positive, got {n}")
    rng = _eval_rng(seed)
    labels = rng.choice(model.K, size=n, p=model.pi)
    z = rng.standard_normal((n, model.latent_size))
    points = np.empty((n, model.g_spec.output_size))
    for k in range(model.K):
        mask = labels == k
        if mask.any():
            points[mask] = forward_generator(model.member_generator(k), z[mask])
    return points, labels


def model_sampler(model: EnsembleModel) -> Sampler:
    def sampler(n: int, seed: int = 0) -> np.ndarray:
        return sample_mixture(model, n, seed)[0]

    return sampler


def dataset_resampler(dataset: DisconnectedDataset) -> Sampler:
    """把数据集本身当作模型: 有放回地重抽已存样本"""

    def sampler(n: int, seed: int = 0) -> np.ndarray:
        idx = _eval_rng(seed).integers(0, dataset.n, size=n)
        return dataset.points[idx]

    return sampler


def _as_callable(G: Generator) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(G, ParamVector):
        return lambda z: forward_generator(G, z)
    return G


@dataclass
class TruncatedSample:
    points: np.ndarray  # 接受的样本 (至多 n_target 个)
    acceptance_rate: float
    draws: int
    component_counts: np.ndarray  # 每个被接受样本最近分量的计数


def truncated_sample(
    G: Generator,
    dataset: DisconnectedDataset,
    n_target: int,
    tol: float,
    max_draws: int,
    latent: int | None = None,
    seed: int = 0,
    chunk: int = 4096,
) -> TruncatedSample:
    """
    拒绝采样实现隐空间截断: 接受 z 当且仅当 G(z) 到支撑集的距离 <= tol

    Args:
        G: 生成器参数或 z -> x 的函数 (后者需要给出 latent)
        tol: 取值 (0, d/4]
        max_draws: 最多抽取的 z 个数

    Raises:
        PartialSampleError: max_draws 内接受数不足 n_target, 异常中带有已找到的样本
    """
    if not 0 < tol <= dataset.separation / 4.0:
        raise ContractError(f"tol must be in (0, d/4 = {dataset.separation / 4.0:.6g}], got {tol}")
    if n_target <= 0 or max_draws <= 0:
        raise ContractError(f"n_target and max_draws must be positive, got {n_target}, {max_draws}")
    if latent is None:
        if not isinstance(G, ParamVector):
            raise ContractError("latent size is required when G is a plain function")
        latent = G.spec.input_size
    fn = _as_callable(G)

    rng = _eval_rng(seed)
    accepted: list[np.ndarray] = []
    nearest: list[np.ndarray] = []
    n_accepted = 0
    draws = 0
    while n_accepted < n_target and draws < max_draws:
        size = min(chunk, max_draws - draws)
        z = rng.standard_normal((size, latent))
        x = fn(z)
        dist, near = distances_to_support(x, dataset)
        keep = dist <= tol
        accepted.append(x[keep])
        nearest.append(near[keep])
        n_accepted += int(keep.sum())
        draws += size

    points = np.concatenate(accepted) if accepted else np.empty((0, 2))
    near = np.concatenate(nearest) if nearest else np.empty(0, dtype=int)
    rate = n_accepted / draws if draws else 0.0
    result = TruncatedSample(
        points=points[:n_target],
        acceptance_rate=rate,
        draws=draws,
        component_counts=np.bincount(near[:n_target], minlength=dataset.K),
    )
    log.debug(f"truncated sampling: {n_accepted} accepted out of {draws} draws (rate {rate:.4f})")
    if n_accepted < n_target:
        raise PartialSampleError(result, draws, n_target)
    return result
