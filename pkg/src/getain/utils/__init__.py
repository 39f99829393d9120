"""工具函数模块"""

from .logger import get_logger
from .rng import init_rng, member_rng

__all__ = ["get_logger", "member_rng", "init_rng"]
