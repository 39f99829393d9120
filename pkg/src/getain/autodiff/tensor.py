"""稠密张量"""

from typing import Sequence

import numpy as np

from ..common.exceptions import DimensionError, DomainError


class Tensor:
    """
    不可变的行优先 float64 张量

    构造时拒绝 NaN/Inf, 数据只读, 可在线程间共享。
    """

    __slots__ = ("_data",)

    def __init__(self, data, shape: Sequence[int] | None = None):
        arr = np.array(data, dtype=np.float64, copy=True)
        if shape is not None:
            shape = tuple(int(s) for s in shape)
            if any(s <= 0 for s in shape):
                raise DimensionError(f"shape entries must be positive, got {shape}")
            if arr.size != int(np.prod(shape)):
                raise DimensionError(f"data length {arr.size} does not match shape {shape}")
            arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def zeros(cls, *shape: int) -> "Tensor":
        return cls(np.zeros(shape))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, ...]:
        return self._data.shape

    def numpy(self) -> np.ndarray:
        """可写副本"""
        return self._data.copy()

    def __len__(self) -> int:
        return self._data.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape})"


def as_array(x) -> np.ndarray:
    """Tensor / ndarray / 标量 统一为 float64 数组"""
    if isinstance(x, Tensor):
        return x.data
    return np.asarray(x, dtype=np.float64)
