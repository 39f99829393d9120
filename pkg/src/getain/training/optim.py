"""优化器: 每个可训练槽位一个实例, 状态互不共享"""

import numpy as np

from ..common.cons import OptimizerKind


class Optimizer:
    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        """返回沿 -grad 更新后的新数组"""
        raise NotImplementedError

    def step_scale(self) -> float | np.ndarray:
        """每个坐标上梯度到步长的比例; 近端映射在同一度量下取步长"""
        raise NotImplementedError


class SGD(Optimizer):
    def __init__(self, lr: float):
        self.lr = lr

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return params - self.lr * grad

    def step_scale(self) -> float:
        return self.lr


class RMSprop(Optimizer):
    """s = decay * s + (1 - decay) * g^2; p -= lr * g / (sqrt(s) + eps)"""

    def __init__(self, lr: float, decay: float = 0.99, eps: float = 1e-8):
        self.lr = lr
        self.decay = decay
        self.eps = eps
        self.square_avg = None

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.square_avg is None:
            self.square_avg = np.zeros_like(grad)
        self.square_avg = self.decay * self.square_avg + (1.0 - self.decay) * grad * grad
        return params - self.lr * grad / (np.sqrt(self.square_avg) + self.eps)

    def step_scale(self) -> float | np.ndarray:
        if self.square_avg is None:
            return self.lr
        return self.lr / (np.sqrt(self.square_avg) + self.eps)


def make_optimizer(cfg) -> Optimizer:
    if cfg.optimizer is OptimizerKind.SGD:
        return SGD(cfg.learning_rate)
    return RMSprop(cfg.learning_rate, cfg.rmsprop_decay, cfg.rmsprop_eps)
