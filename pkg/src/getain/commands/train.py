"""
train: 按配置的模式训练, 写出检查点与历史

输出目录结构:
    <out>/checkpoints/epoch_000100.ckpt   每个评估间隔一个
    <out>/final.ckpt
    <out>/history.csv
    <out>/last_good.ckpt                  仅在发散时写出
配置了 lambda_sweep 时每个 lambda 一个子目录 <out>/lambda_<v>/。
"""

from pathlib import Path
from typing import Optional

from ..common.config import ExperimentConfig
from ..common.exceptions import DivergenceError, GetainError
from ..common.settings import CHECKPOINT_DIR, FINAL_CHECKPOINT, HISTORY_CSV
from ..datasets import DisconnectedDataset, read_dataset
from ..networks import EnsembleModel, save_checkpoint
from ..training import TrainConfig, train
from ..utils.logger import get_logger
from .base import CommandResult, guard_outputs, resolve_config

log = get_logger()

LAST_GOOD_CHECKPOINT = "last_good.ckpt"


def checkpoint_name(epoch: int) -> str:
    return f"epoch_{epoch:06d}.ckpt"


def run_dir_name(lam: float) -> str:
    return f"lambda_{lam:g}"


def train_run(cfg: TrainConfig, dataset: DisconnectedDataset, run_dir: Path, force: bool = False) -> EnsembleModel:
    """训练一次并写出该次运行的全部文件; 发散时保留最后一个正常状态后重新抛出"""
    ckpt_dir = run_dir / CHECKPOINT_DIR
    guard_outputs(
        [ckpt_dir, run_dir / FINAL_CHECKPOINT, run_dir / HISTORY_CSV, run_dir / LAST_GOOD_CHECKPOINT], force
    )

    def on_eval(epoch: int, model: EnsembleModel) -> None:
        save_checkpoint(model, ckpt_dir / checkpoint_name(epoch))

    try:
        result = train(cfg, dataset, on_eval)
    except DivergenceError as e:
        if e.last_good is not None:
            path = save_checkpoint(e.last_good, run_dir / LAST_GOOD_CHECKPOINT)
            log.error(f"training diverged at epoch {e.epoch}; last good state kept in {path}")
        else:
            log.error(f"training diverged at epoch {e.epoch} before the first evaluation")
        raise

    save_checkpoint(result.model, run_dir / FINAL_CHECKPOINT)
    result.history.write(run_dir / HISTORY_CSV)
    log.info(f"run written to {run_dir}")
    return result.model


def cmd_train(
    config: ExperimentConfig | Path | str,
    out: Optional[Path | str] = None,
    seed: Optional[int] = None,
    force: bool = False,
    data: Optional[Path | str] = None,
) -> CommandResult:
    """
    data 缺省为输出目录 (gen-data 的写出位置)

    lambda_sweep 中某个值失败时继续其余的值, 在结果中逐项列出。
    """
    cfg = resolve_config(config, seed)
    out_dir = cfg.output_dir(out)
    dataset = read_dataset(Path(data) if data is not None else out_dir)
    result = CommandResult("train")

    sweep = cfg.get(cfg.lambdaSweep)
    if not sweep:
        train_run(cfg.train_config(), dataset, out_dir, force)
        result.done(str(out_dir))
        return result

    log.info(f"lambda sweep over {sweep}")
    for lam in sweep:
        run_dir = out_dir / run_dir_name(lam)
        try:
            train_run(cfg.train_config(lam), dataset, run_dir, force)
        except GetainError as e:
            result.fail(str(run_dir), e)
        else:
            result.done(str(run_dir))
    return result
