"""eval: 计算检查点 (或数据集自身) 的指标, 追加到 metrics.csv, 可选 SVG 散点"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from ..common.cons import SharingMode
from ..common.config import ExperimentConfig
from ..common.exceptions import ConfigError, GetainError
from ..common.settings import CHECKPOINT_DIR, FINAL_CHECKPOINT, METRICS_CSV
from ..datasets import DisconnectedDataset, read_dataset
from ..evaluation import (
    EvalSettings,
    MetricReport,
    dataset_resampler,
    evaluate_checkpoint,
    evaluate_model,
    model_sampler,
    write_metrics,
    write_scatter_svg,
)
from ..networks import EnsembleModel, MlpSpec, load_checkpoint
from ..utils.logger import get_logger
from .base import CommandResult, guard_outputs, resolve_config

log = get_logger()

RESAMPLER_LABEL = "resampler"


def default_checkpoints(run_dir: Path) -> list[Path]:
    """运行目录中全部周期检查点; 没有时退回 final.ckpt"""
    found = sorted((run_dir / CHECKPOINT_DIR).glob("*.ckpt"))
    return found or [run_dir / FINAL_CHECKPOINT]


def check_compatible(model: EnsembleModel, dataset: DisconnectedDataset, specs: tuple[MlpSpec, MlpSpec]) -> None:
    if model.mode is not SharingMode.SINGLE and model.K != dataset.K:
        raise ConfigError(f"checkpoint has {model.K} members, dataset has {dataset.K} components")
    g_spec, d_spec = specs
    if model.g_spec.layer_sizes != g_spec.layer_sizes:
        raise ConfigError(f"checkpoint generator {model.g_spec.layer_sizes} does not match config {g_spec.layer_sizes}")
    if model.d_spec.layer_sizes != d_spec.layer_sizes:
        raise ConfigError(f"checkpoint critic {model.d_spec.layer_sizes} does not match config {d_spec.layer_sizes}")


def _scatter(sampler, dataset: DisconnectedDataset, settings: EvalSettings, path: Path, title: str) -> None:
    write_scatter_svg(dataset.points, sampler(settings.n_samples, settings.seed), dataset, path, title)


def evaluate_one(
    path: Path,
    dataset: DisconnectedDataset,
    settings: EvalSettings,
    specs: tuple[MlpSpec, MlpSpec],
    svg_dir: Optional[Path] = None,
) -> MetricReport:
    model = load_checkpoint(path)
    check_compatible(model, dataset, specs)
    report = evaluate_checkpoint(model, dataset, settings, checkpoint=path.name)
    if svg_dir is not None:
        _scatter(model_sampler(model), dataset, settings, svg_dir / f"{path.stem}.svg", path.stem)
    return report


def cmd_eval(
    config: ExperimentConfig | Path | str,
    out: Optional[Path | str] = None,
    seed: Optional[int] = None,
    force: bool = False,
    checkpoints: Sequence[Path | str] = (),
    resampler: bool = False,
    svg: Optional[bool] = None,
    data: Optional[Path | str] = None,
    workers: int = 1,
) -> CommandResult:
    """
    checkpoints 为空且未指定 resampler 时评估输出目录下的全部周期检查点

    metrics.csv 默认追加; --force-overwrite 时重写。多个检查点可分给工作线程,
    行顺序与传入顺序一致。
    """
    cfg = resolve_config(config, seed)
    out_dir = cfg.output_dir(out)
    dataset = read_dataset(Path(data) if data is not None else out_dir)
    settings = cfg.eval_settings()
    specs = cfg.network_specs()
    svg_dir = out_dir if (cfg.get(cfg.evalSvg) if svg is None else svg) else None
    metrics_path = out_dir / METRICS_CSV

    paths = [Path(p) for p in checkpoints]
    if not paths and not resampler:
        paths = default_checkpoints(out_dir)
    planned = []
    if svg_dir is not None:
        planned = [svg_dir / f"{p.stem}.svg" for p in paths]
        if resampler:
            planned.append(svg_dir / f"{RESAMPLER_LABEL}.svg")
    guard_outputs(planned + ([metrics_path] if force else []), force)

    result = CommandResult("eval")
    reports: list[MetricReport] = []

    if resampler:
        report = evaluate_model(dataset_resampler(dataset), [], dataset, settings, RESAMPLER_LABEL, 0)
        if svg_dir is not None:
            _scatter(dataset_resampler(dataset), dataset, settings, svg_dir / f"{RESAMPLER_LABEL}.svg", RESAMPLER_LABEL)
        reports.append(report)
        result.done(RESAMPLER_LABEL)

    def run(path: Path) -> MetricReport | Exception:
        try:
            return evaluate_one(path, dataset, settings, specs, svg_dir)
        except (GetainError, OSError) as e:
            return e

    # pyplot 不是线程安全的, 画图时顺序执行
    if workers > 1 and len(paths) > 1 and svg_dir is None:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, paths))
    else:
        outcomes = [run(p) for p in paths]

    for path, outcome in zip(paths, outcomes):
        if isinstance(outcome, Exception):
            result.fail(str(path), outcome)
        else:
            reports.append(outcome)
            result.done(str(path))

    if reports:
        write_metrics(reports, metrics_path, append=True)
    return result
