"""随机数流"""

import numpy as np

from ..common.cons import STREAM_INIT, STREAM_TRAIN


def member_rng(seed: int, member: int = 0, stream: int = STREAM_TRAIN) -> np.random.Generator:
    """每个 (seed, 成员, 用途) 独立的随机数流, 与训练顺序无关"""
    return np.random.default_rng([int(seed), int(member), int(stream)])


def init_rng(seed: int, member: int = 0) -> np.random.Generator:
    return member_rng(seed, member, STREAM_INIT)
