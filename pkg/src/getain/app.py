"""应用入口"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.getain import __version__
from src.getain.commands import CommandResult, cmd_compare, cmd_eval, cmd_gen_data, cmd_train
from src.getain.common.exceptions import GetainError
from src.getain.utils.logger import get_logger

log = get_logger()


def _common(parser: argparse.ArgumentParser, needs_config: bool = True) -> None:
    parser.add_argument("--config", type=Path, required=needs_config, help="实验配置 (INI)")
    parser.add_argument("--out", type=Path, default=None, help="输出目录, 缺省取配置 [output] dir")
    parser.add_argument("--seed", type=int, default=None, help="覆盖配置中的全部种子")
    parser.add_argument("--force-overwrite", action="store_true", help="允许覆盖已有输出")


def create_parser() -> argparse.ArgumentParser:
    """创建命令行解析器"""
    parser = argparse.ArgumentParser(prog="getain", description="GAN ensembles on disconnected 2-D data")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="构造数据集")
    _common(gen)

    train = sub.add_parser("train", help="训练 (模式由配置决定)")
    _common(train)
    train.add_argument("--data", type=Path, default=None, help="数据集目录, 缺省为输出目录")

    ev = sub.add_parser("eval", help="评估检查点")
    _common(ev)
    ev.add_argument("--data", type=Path, default=None, help="数据集目录, 缺省为输出目录")
    ev.add_argument("--checkpoint", type=Path, action="append", default=[], help="可重复; 缺省为全部周期检查点")
    ev.add_argument("--resampler", action="store_true", help="把数据集自身当作模型评估")
    ev.add_argument("--svg", action="store_true", default=None, help="写出散点 SVG")
    ev.add_argument("--workers", type=int, default=1, help="并行评估检查点的线程数")

    cmp = sub.add_parser("compare", help="比较多个运行的指标")
    _common(cmp, needs_config=False)
    cmp.add_argument("runs", type=Path, nargs="+", help="运行目录 (含 metrics.csv)")
    return parser


def run(args: argparse.Namespace) -> CommandResult:
    force = args.force_overwrite
    if args.command == "gen-data":
        return cmd_gen_data(args.config, args.out, args.seed, force)
    if args.command == "train":
        return cmd_train(args.config, args.out, args.seed, force, data=args.data)
    if args.command == "eval":
        return cmd_eval(
            args.config,
            args.out,
            args.seed,
            force,
            checkpoints=args.checkpoint,
            resampler=args.resampler,
            svg=args.svg,
            data=args.data,
            workers=args.workers,
        )
    return cmd_compare(args.runs, args.out, force)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数; 返回退出码 (全部完成为 0)"""
    args = create_parser().parse_args(argv)
    try:
        result = run(args)
    except GetainError as e:
        log.error(f"{args.command} failed: {e}")
        return 1
    print(result.summary())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
