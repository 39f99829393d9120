"""命令公共部分: 配置解析, 输出保护, 结果汇总"""

import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from ..common.config import ExperimentConfig, load_config
from ..common.exceptions import OutputExistsError
from ..utils.logger import get_logger

log = get_logger()


@dataclass
class CommandResult:
    """一次命令的完成项与失败项; 只有全部完成时退出码为 0"""

    command: str
    completed: list[str] = field(default_factory=list)
    failed: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def done(self, item: str) -> None:
        self.completed.append(item)
        log.info(f"{self.command}: {item} done")

    def fail(self, item: str, error: Exception) -> None:
        self.failed.append((item, str(error)))
        log.error(f"{self.command}: {item} failed: {error}")

    def summary(self) -> str:
        lines = [f"{self.command}: {len(self.completed)} completed, {len(self.failed)} failed"]
        lines += [f"  ok     {item}" for item in self.completed]
        lines += [f"  failed {item}: {reason}" for item, reason in self.failed]
        return "\n".join(lines)


def resolve_config(config: ExperimentConfig | Path | str, seed: Optional[int] = None) -> ExperimentConfig:
    cfg = config if isinstance(config, ExperimentConfig) else load_config(config)
    if seed is not None:
        cfg.override_seed(seed)
    return cfg


def guard_outputs(paths: Iterable[Path], force: bool) -> None:
    """已有输出且未指定 --force-overwrite 时拒绝执行"""
    existing = [p for p in paths if p.exists()]
    if not existing:
        return
    if not force:
        raise OutputExistsError(
            f"refusing to overwrite {', '.join(str(p) for p in existing)} (use --force-overwrite)"
        )
    for p in existing:
        log.warning(f"overwriting {p}")
        if p.is_dir():
            shutil.rmtree(p)
        else:
            p.unlink()
