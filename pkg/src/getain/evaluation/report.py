"""评估报告与指标 CSV"""

import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..common.exceptions import ContractError
from ..datasets.dataset import DisconnectedDataset
from ..networks.ensemble import EnsembleModel
from ..networks.mlp import ParamVector
from ..utils.logger import get_logger
from .metrics import frechet_gaussian, inversion_errors, knn_precision_recall, out_of_support_mass
from .samplers import Sampler, model_sampler

log = get_logger()

METRIC_COLUMNS = ["checkpoint", "epoch", "frechet", "precision", "recall", "inversion_mse", "oos_mass", "oos_ci"]
METRIC_NAMES = METRIC_COLUMNS[2:]


@dataclass(frozen=True)
class EvalSettings:
    """评估参数; 关闭的指标在报告中记为 NaN"""

    n_samples: int = 2000  # Fréchet / 精度召回所用样本数
    oos_samples: int = 100_000
    threshold: Optional[float] = None  # 缺省 d/4
    knn_k: int = 3
    inversion_targets: int = 100
    inversion_iters: int = 1000
    inversion_restarts: int = 5
    inversion_lr: float = 0.05
    seed: int = 0
    frechet: bool = True
    precision_recall: bool = True
    inversion: bool = True
    oos: bool = True

    def __post_init__(self):
        for name in ("n_samples", "knn_k", "inversion_targets", "inversion_iters", "inversion_restarts"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.oos_samples < 1000:
            raise ContractError(f"oos_samples must be >= 1000, got {self.oos_samples}")


@dataclass(frozen=True)
class MetricReport:
    frechet: float
    precision: float
    recall: float
    inversion_mse: float
    oos_mass: float
    oos_ci: float
    checkpoint: str = ""
    epoch: int = 0

    def __post_init__(self):
        for name in METRIC_NAMES:
            v = getattr(self, name)
            if math.isnan(v):
                continue
            if not math.isfinite(v) or v < 0:
                raise ContractError(f"{name} must be finite and >= 0, got {v}")
        for name in ("precision", "recall", "oos_mass"):
            v = getattr(self, name)
            if not math.isnan(v) and v > 1:
                raise ContractError(f"{name} must lie in [0, 1], got {v}")

    def to_row(self) -> dict:
        row = asdict(self)
        return {key: row[key] for key in METRIC_COLUMNS}


def _real_subset(dataset: DisconnectedDataset, n: int, seed: int) -> np.ndarray:
    if dataset.n <= n:
        return dataset.points
    idx = np.random.default_rng([int(seed), 3]).choice(dataset.n, size=n, replace=False)
    return dataset.points[np.sort(idx)]


def evaluate_model(
    sampler: Sampler,
    generators: Sequence[ParamVector],
    dataset: DisconnectedDataset,
    settings: EvalSettings = EvalSettings(),
    checkpoint: str = "",
    epoch: int = 0,
) -> MetricReport:
    """
    按 settings 计算全部指标

    generators 为空时 (例如数据集重采样器) 不做反演, inversion_mse 记为 NaN;
    集成模型对每个目标取各成员反演误差的最小值。
    """
    nan = float("nan")
    seed = settings.seed
    generated = sampler(settings.n_samples, seed)
    real = _real_subset(dataset, settings.n_samples, seed)

    frechet = frechet_gaussian(real, generated) if settings.frechet else nan
    precision, recall = (nan, nan)
    if settings.precision_recall:
        precision, recall = knn_precision_recall(real, generated, settings.knn_k)

    oos_mass, oos_ci = (nan, nan)
    if settings.oos:
        est = out_of_support_mass(sampler, dataset, settings.oos_samples, settings.threshold, seed)
        oos_mass, oos_ci = est.mass, est.ci_halfwidth

    inv = nan
    if settings.inversion and generators:
        targets = _real_subset(dataset, settings.inversion_targets, seed + 1)
        errors = np.min(
            [
                inversion_errors(
                    g,
                    targets,
                    settings.inversion_iters,
                    settings.inversion_restarts,
                    settings.inversion_lr,
                    seed,
                )
                for g in generators
            ],
            axis=0,
        )
        inv = float(errors.mean())

    report = MetricReport(frechet, precision, recall, inv, oos_mass, oos_ci, checkpoint, epoch)
    log.info(
        f"eval {checkpoint or '<model>'} @ {epoch}: frechet = {frechet:.4g}, precision = {precision:.3f}, "
        f"recall = {recall:.3f}, inversion = {inv:.4g}, oos = {oos_mass:.4g} ± {oos_ci:.2g}"
    )
    return report


def evaluate_checkpoint(
    model: EnsembleModel,
    dataset: DisconnectedDataset,
    settings: EvalSettings = EvalSettings(),
    checkpoint: str = "",
) -> MetricReport:
    epoch = int(model.meta.get("epoch", 0))
    return evaluate_model(model_sampler(model), model.member_generators(), dataset, settings, checkpoint, epoch)


def metrics_frame(reports: Sequence[MetricReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=METRIC_COLUMNS)


def write_metrics(reports: Sequence[MetricReport], path: Path | str, append: bool = True) -> Path:
    """
    写入 (或追加到) 指标 CSV

    追加时同一 (checkpoint, epoch) 只保留最新一行, 重复评估不会产生重复行。
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = metrics_frame(reports)
    if append and path.exists():
        frame = pd.concat([pd.read_csv(path), frame], ignore_index=True)
        frame = frame.drop_duplicates(["checkpoint", "epoch"], keep="last").reset_index(drop=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    log.debug(f"metrics written: {path} ({len(frame)} rows)")
    return path


def read_metrics(path: Path | str) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in METRIC_COLUMNS if c not in frame.columns]
    if missing:
        raise ContractError(f"{path}: missing metric columns {missing}")
    return frame
