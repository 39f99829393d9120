"""gen-data: 按配置构造并写出数据集"""

from pathlib import Path
from typing import Optional

from ..common.config import ExperimentConfig
from ..common.settings import DATASET_CSV, DATASET_META
from ..datasets import build_dataset, write_dataset
from .base import CommandResult, guard_outputs, resolve_config


def cmd_gen_data(
    config: ExperimentConfig | Path | str,
    out: Optional[Path | str] = None,
    seed: Optional[int] = None,
    force: bool = False,
) -> CommandResult:
    cfg = resolve_config(config, seed)
    out_dir = cfg.output_dir(out)
    guard_outputs([out_dir / DATASET_CSV, out_dir / DATASET_META], force)

    dataset = build_dataset(
        cfg.component_specs(),
        cfg.mixture_weights(),
        cfg.get(cfg.datasetN),
        cfg.get(cfg.datasetSeed),
    )
    write_dataset(dataset, out_dir)

    result = CommandResult("gen-data")
    result.done(f"{out_dir} (K = {dataset.K}, d = {dataset.separation:.6g})")
    return result
