"""命令行动作"""

from .base import CommandResult, guard_outputs, resolve_config
from .compare import cmd_compare, comparison_frame
from .evaluate import cmd_eval
from .gen_data import cmd_gen_data
from .train import cmd_train, train_run

__all__ = [
    "CommandResult",
    "guard_outputs",
    "resolve_config",
    "cmd_gen_data",
    "cmd_train",
    "train_run",
    "cmd_eval",
    "cmd_compare",
    "comparison_frame",
]
