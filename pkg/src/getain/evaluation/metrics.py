"""
评估指标

- out_of_support_mass: 到支撑集距离 > tau 的样本比例, 99% Wilson 区间
- frechet_gaussian: 两组点的高斯拟合之间的 Fréchet 距离
- knn_precision_recall: k 近邻流形覆盖的精度/召回
- inversion_mse: 梯度下降反演隐变量后的最小重建误差
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist
from scipy.stats import binomtest

from ..autodiff import Tape, ops
from ..common.exceptions import ContractError, DimensionError
from ..common.settings import FRECHET_REG, OOS_CONFIDENCE
from ..datasets.dataset import DisconnectedDataset, distances_to_support
from ..networks.mlp import Network, ParamVector
from .samplers import Sampler

CHUNK = 512


# ==================== 支撑集外质量 ====================


@dataclass(frozen=True)
class OosEstimate:
    mass: float
    ci_halfwidth: float
    low: float
    high: float
    count: int
    n: int


def points_oos_mass(points, dataset: DisconnectedDataset, threshold: float | None = None) -> OosEstimate:
    """一组已有样本的支撑集外比例"""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = points.shape[0]
    if n == 0:
        raise ContractError("no points to evaluate")
    tau = dataset.oos_threshold if threshold is None else float(threshold)
    if not 0 < tau < dataset.separation / 2.0:
        raise ContractError(f"threshold must be in (0, d/2 = {dataset.separation / 2.0:.6g}), got {tau}")
    dist, _ = distances_to_support(points, dataset)
    count = int(np.count_nonzero(dist > tau))
    ci = binomtest(count, n).proportion_ci(confidence_level=OOS_CONFIDENCE, method="wilson")
    return OosEstimate(count / n, (ci.high - ci.low) / 2.0, float(ci.low), float(ci.high), count, n)


def out_of_support_mass(
    sampler: Union[Sampler, np.ndarray],
    dataset: DisconnectedDataset,
    n: int = 100_000,
    threshold: float | None = None,
    seed: int = 0,
) -> OosEstimate:
    """
    从 sampler 抽 n 个样本估计支撑集外质量

    threshold 缺省为 d/4, 必须落在 (0, d/2); n >= 1000
    """
    if n < 1000:
        raise ContractError(f"out-of-support estimate needs n >= 1000, got {n}")
    points = sampler if isinstance(sampler, np.ndarray) else sampler(n, seed)
    return points_oos_mass(points, dataset, threshold)


# ==================== Fréchet 距离 ====================


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def frechet_from_moments(mu1, sigma1, mu2, sigma2) -> float:
    """
    ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2})

    Tr (S1 S2)^{1/2} = Tr (S1^{1/2} S2 S1^{1/2})^{1/2}, 后者对称半正定, 用特征分解求。
    """
    mu1, mu2 = np.atleast_1d(mu1), np.atleast_1d(mu2)
    sigma1, sigma2 = np.atleast_2d(sigma1), np.atleast_2d(sigma2)
    if mu1.shape != mu2.shape or sigma1.shape != sigma2.shape or sigma1.shape != (mu1.size, mu1.size):
        raise DimensionError(f"moment shapes do not match: {mu1.shape}, {sigma1.shape}, {mu2.shape}, {sigma2.shape}")
    root = _psd_sqrt(sigma1)
    inner = root @ sigma2 @ root
    inner = 0.5 * (inner + inner.T)
    tr_covmean = float(np.sqrt(np.clip(linalg.eigh(inner, eigvals_only=True), 0.0, None)).sum())
    diff = mu1 - mu2
    value = float(diff @ diff + np.trace(sigma1) + np.trace(sigma2) - 2.0 * tr_covmean)
    return max(value, 0.0)


def gaussian_fit(points) -> tuple[np.ndarray, np.ndarray]:
    """均值与 (正则化后的) 无偏协方差"""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise DimensionError(f"points must be a matrix, got shape {points.shape}")
    if points.shape[0] < 3:
        raise ContractError(f"need at least 3 points for a Gaussian fit, got {points.shape[0]}")
    mu = points.mean(axis=0)
    sigma = np.atleast_2d(np.cov(points, rowvar=False)) + FRECHET_REG * np.eye(points.shape[1])
    return mu, sigma


def frechet_gaussian(points_a, points_b) -> float:
    mu1, s1 = gaussian_fit(points_a)
    mu2, s2 = gaussian_fit(points_b)
    return frechet_from_moments(mu1, s1, mu2, s2)


# ==================== k 近邻精度/召回 ====================


def knn_radii(points: np.ndarray, k: int) -> np.ndarray:
    """每个点到其第 k 个近邻 (不含自身) 的距离"""
    radii = np.empty(points.shape[0])
    for start in range(0, points.shape[0], CHUNK):
        d = cdist(points[start : start + CHUNK], points)
        radii[start : start + CHUNK] = np.partition(d, k, axis=1)[:, k]
    return radii


def coverage(queries: np.ndarray, reference: np.ndarray, radii: np.ndarray) -> float:
    """queries 中落在某个参考点 k 近邻球 (闭球) 内的比例"""
    covered = 0
    for start in range(0, queries.shape[0], CHUNK):
        d = cdist(queries[start : start + CHUNK], reference)
        covered += int(np.count_nonzero((d <= radii[None, :]).any(axis=1)))
    return covered / queries.shape[0]


def knn_precision_recall(real_points, gen_points, k: int = 3) -> tuple[float, float]:
    """precision: 生成点被真实流形覆盖的比例; recall: 真实点被生成流形覆盖的比例"""
    real = np.asarray(real_points, dtype=np.float64)
    gen = np.asarray(gen_points, dtype=np.float64)
    if real.ndim != 2 or gen.ndim != 2 or real.shape[1] != gen.shape[1]:
        raise DimensionError(f"point sets must be matrices of equal width, got {real.shape} and {gen.shape}")
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    if real.shape[0] <= k or gen.shape[0] <= k:
        raise ContractError(f"both sets need more than k = {k} points, got {real.shape[0]} and {gen.shape[0]}")
    precision = coverage(gen, real, knn_radii(real, k))
    recall = coverage(real, gen, knn_radii(gen, k))
    return precision, recall


# ==================== 隐变量反演 ====================


def inversion_errors(
    G: ParamVector,
    targets,
    iters: int = 1000,
    restarts: int = 5,
    lr: float = 0.05,
    seed: int = 0,
) -> np.ndarray:
    """
    每个目标的最小重建误差 ||G(z) - x||^2 / p

    所有目标同时做批量梯度下降; 第 r 次重启的初值来自 default_rng([seed, r]);
    取所有迭代与重启中的最小值。
    """
    if iters < 1 or restarts < 1:
        raise ContractError(f"iters and restarts must be >= 1, got {iters}, {restarts}")
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    spec = G.spec
    if targets.shape[1] != spec.output_size:
        raise DimensionError(f"targets have width {targets.shape[1]}, generator outputs {spec.output_size}")
    p = spec.output_size
    best = np.full(targets.shape[0], np.inf)

    for r in range(restarts):
        z = np.random.default_rng([int(seed), r]).standard_normal((targets.shape[0], spec.input_size))
        for step in range(iters + 1):
            tape = Tape()
            z_var = tape.parameter(z)
            net = Network.bind(tape.constant(G.values), spec)
            residual = ops.sub(net(z_var), targets)
            errors = (residual.value**2).sum(axis=1) / p
            best = np.fmin(best, errors)
            if step == iters:
                break
            loss = ops.mul(ops.sum(ops.square(residual)), 1.0 / p)
            z = z - lr * tape.backward(loss)[z_var]
    return best


def inversion_mse(
    G: ParamVector,
    targets,
    iters: int = 1000,
    restarts: int = 5,
    lr: float = 0.05,
    seed: int = 0,
) -> float:
    return float(inversion_errors(G, targets, iters, restarts, lr, seed).mean())
