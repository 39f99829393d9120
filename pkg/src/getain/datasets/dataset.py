"""
不连通数据集

K 个两两不相交的闭区域, 证明其最小间距 d > 0 后按 Cat(pi) 抽标签、在对应区域内均匀采样。
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from ..common.exceptions import CertificationError, ContractError, DimensionError
from ..common.settings import MEMBERSHIP_ATOL
from ..utils.logger import get_logger
from .components import ComponentSpec, component_distance

log = get_logger()


def check_weights(pi, K: int | None = None) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.float64)
    if pi.ndim != 1 or pi.size == 0:
        raise ContractError(f"mixture weights must be a non-empty vector, got shape {pi.shape}")
    if K is not None and pi.size != K:
        raise DimensionError(f"expected {K} mixture weights, got {pi.size}")
    if np.any(~np.isfinite(pi)) or np.any(pi < 0) or not np.isclose(pi.sum(), 1.0, atol=1e-9):
        raise ContractError(f"mixture weights must be non-negative and sum to 1, got {pi}")
    return pi


@dataclass(frozen=True)
class DisconnectedDataset:
    """构造后只读, 可在线程间共享"""

    components: tuple[ComponentSpec, ...]
    separation: float
    points: np.ndarray  # [N×2]
    labels: np.ndarray  # [N]
    pi_true: np.ndarray
    seed: int
    pair_distances: np.ndarray = field(repr=False, default=None)  # [K×K]

    def __post_init__(self):
        for name in ("points", "labels", "pi_true", "pair_distances"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.array(arr)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    @property
    def K(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    @property
    def oos_threshold(self) -> float:
        """支撑集外的默认判定阈值 tau = d/4"""
        return self.separation / 4.0

    def class_points(self, k: int) -> np.ndarray:
        if not 0 <= k < self.K:
            raise ContractError(f"class index {k} out of range [0, {self.K})")
        return self.points[self.labels == k]

    def class_subsets(self) -> list[np.ndarray]:
        """每个类别的样本; 存在空类别时报错"""
        subsets = [self.class_points(k) for k in range(self.K)]
        empty = [k for k, s in enumerate(subsets) if s.shape[0] == 0]
        if empty:
            raise ContractError(f"classes {empty} have no samples")
        return subsets


def certify_separation(components: Sequence[ComponentSpec]) -> tuple[float, np.ndarray]:
    """两两闭式距离; 任意一对距离 <= 0 时抛出 CertificationError"""
    K = len(components)
    dist = np.zeros((K, K))
    for j, k in combinations(range(K), 2):
        d = component_distance(components[j], components[k])
        if d <= MEMBERSHIP_ATOL:
            raise CertificationError((j, k), d)
        dist[j, k] = dist[k, j] = d
    separation = float(dist[np.triu_indices(K, 1)].min()) if K > 1 else float("inf")
    return separation, dist


def build_dataset(
    specs: Sequence[ComponentSpec],
    pi,
    n: int,
    seed: int,
) -> DisconnectedDataset:
    if n <= 0:
        raise ContractError(f"n must be positive, got {n}")
    if not specs:
        raise ContractError("at least one component is required")
    components = tuple(specs)
    K = len(components)
    pi = check_weights(pi, K)

    separation, dist = certify_separation(components)
    log.info(f"certified {K} components, separation d = {separation:.6g}")

    rng = np.random.default_rng(seed)
    labels = rng.choice(K, size=n, p=pi)
    points = np.empty((n, 2))
    for k, comp in enumerate(components):
        mask = labels == k
        points[mask] = comp.sample(int(mask.sum()), rng)

    ds = DisconnectedDataset(components, separation, points, labels, pi, seed, dist)
    _check_membership(ds)
    log.info(f"dataset built: n = {n}, counts = {np.bincount(labels, minlength=K).tolist()}")
    return ds


def _check_membership(ds: DisconnectedDataset) -> None:
    for k, comp in enumerate(ds.components):
        inside = comp.contains(ds.class_points(k))
        if not np.all(inside):
            raise ContractError(f"{int((~inside).sum())} samples of class {k} lie outside their component")


def distances_to_support(points, ds: DisconnectedDataset) -> tuple[np.ndarray, np.ndarray]:
    """批量: 每个点到最近分量的距离与该分量下标 (并列取最小下标)"""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.shape[1] != 2:
        raise DimensionError(f"points must be [N×2], got {pts.shape}")
    table = np.column_stack([comp.distances(pts) for comp in ds.components])
    table = np.where(table <= MEMBERSHIP_ATOL, 0.0, table)
    nearest = np.argmin(table, axis=1)
    return table[np.arange(pts.shape[0]), nearest], nearest


def distance_to_support(x, ds: DisconnectedDataset) -> tuple[float, int]:
    dist, nearest = distances_to_support(np.asarray(x, dtype=np.float64).reshape(1, 2), ds)
    return float(dist[0]), int(nearest[0])


def mle_mixture_weights(labels, K: int) -> np.ndarray:
    """pi_i = count_i / N"""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ContractError("cannot estimate mixture weights from no labels")
    if K <= 0:
        raise ContractError(f"K must be positive, got {K}")
    if labels.min() < 0 or labels.max() >= K:
        raise ContractError(f"labels must lie in [0, {K})")
    return np.bincount(labels.astype(np.int64), minlength=K) / labels.size
