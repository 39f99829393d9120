"""compare: 把多个运行的 metrics.csv 合成长表 `run,epoch,metric,value`"""

from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from ..common.exceptions import ContractError, ScheduleMismatchError
from ..common.settings import COMPARE_CSV, METRICS_CSV
from ..evaluation import METRIC_NAMES, read_metrics
from ..utils.logger import get_logger
from .base import CommandResult, guard_outputs
from .evaluate import RESAMPLER_LABEL

log = get_logger()

COMPARE_COLUMNS = ["run", "epoch", "metric", "value"]


def run_labels(run_dirs: Sequence[Path]) -> list[str]:
    """目录名作为运行标签, 重名时加 #2, #3 ..."""
    labels, seen = [], {}
    for d in run_dirs:
        name = d.name or str(d)
        seen[name] = seen.get(name, 0) + 1
        labels.append(name if seen[name] == 1 else f"{name}#{seen[name]}")
    return labels


def run_metrics(run_dir: Path) -> pd.DataFrame:
    """一个运行的指标, 每个 epoch 取最后追加的一行; 数据集自评估行不参与"""
    path = run_dir / METRICS_CSV
    if not path.exists():
        raise ContractError(f"{run_dir} has no {METRICS_CSV}")
    frame = read_metrics(path)
    frame = frame[frame["checkpoint"] != RESAMPLER_LABEL]
    if frame.empty:
        raise ContractError(f"{path} has no checkpoint rows")
    return frame.drop_duplicates("epoch", keep="last").sort_values("epoch").reset_index(drop=True)


def comparison_frame(run_dirs: Sequence[Path | str]) -> pd.DataFrame:
    run_dirs = [Path(d) for d in run_dirs]
    if len(run_dirs) < 2:
        raise ContractError(f"compare needs at least 2 runs, got {len(run_dirs)}")

    frames = [run_metrics(d) for d in run_dirs]
    schedule = frames[0]["epoch"].tolist()
    for d, frame in zip(run_dirs[1:], frames[1:]):
        if frame["epoch"].tolist() != schedule:
            raise ScheduleMismatchError(
                f"{d} was evaluated at epochs {frame['epoch'].tolist()}, {run_dirs[0]} at {schedule}"
            )

    parts = []
    for label, frame in zip(run_labels(run_dirs), frames):
        long = frame.melt(id_vars=["epoch"], value_vars=METRIC_NAMES, var_name="metric", value_name="value")
        long.insert(0, "run", label)
        parts.append(long)
    table = pd.concat(parts, ignore_index=True)[COMPARE_COLUMNS]
    return table.sort_values(["run", "epoch"], kind="stable").reset_index(drop=True)


def cmd_compare(
    run_dirs: Sequence[Path | str],
    out: Optional[Path | str] = None,
    force: bool = False,
) -> CommandResult:
    """out 缺省为当前目录"""
    out_dir = Path(out) if out is not None else Path.cwd()
    path = out_dir / COMPARE_CSV
    guard_outputs([path], force)

    table = comparison_frame(run_dirs)
    out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format="%.17g")
    log.info(f"comparison of {len(run_dirs)} runs written to {path} ({len(table)} rows)")

    result = CommandResult("compare")
    result.done(str(path))
    return result
