"""可微运算"""

from typing import Sequence

import numpy as np
from scipy.special import expit

from ..common.cons import Activation
from ..common.exceptions import ContractError, DimensionError, DomainError
from .tape import Tape, Var
from .tensor import Tensor


def _tape_of(*xs) -> Tape:
    for x in xs:
        if isinstance(x, Var):
            return x.tape
    raise ContractError("at least one operand must be a Var")


def _lift(*xs) -> list[Var]:
    tape = _tape_of(*xs)
    return [tape.lift(x) for x in xs]


# ==================== 矩阵运算 ====================


def matmul(a: Var, b: Var) -> Var:
    """[m×k] @ [k×n]"""
    a, b = _lift(a, b)
    if a.value.ndim != 2 or b.value.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    av, bv = a.value, b.value

    def vjp(g):
        return g @ bv.T, av.T @ g

    return a.tape.record("matmul", [a, b], av @ bv, vjp)


def add_bias(x: Var, b: Var) -> Var:
    """按行广播加偏置: [m×n] + [n]"""
    x, b = _lift(x, b)
    if x.value.ndim != 2 or b.value.ndim != 1 or x.shape[1] != b.shape[0]:
        raise DimensionError(f"add_bias shape mismatch: {x.shape} + {b.shape}")

    def vjp(g):
        return g, g.sum(axis=0)

    return x.tape.record("add_bias", [x, b], x.value + b.value, vjp)


def transpose(x: Var) -> Var:
    if x.value.ndim != 2:
        raise DimensionError(f"transpose expects a matrix, got {x.shape}")

    def vjp(g):
        return (g.T,)

    return x.tape.record("transpose", [x], x.value.T.copy(), vjp)


def take(flat: Var, start: int, stop: int, shape: Sequence[int]) -> Var:
    """从一维参数向量中切出 [start, stop) 并 reshape"""
    if flat.value.ndim != 1 or not 0 <= start <= stop <= flat.shape[0]:
        raise DimensionError(f"take [{start}, {stop}) out of range for {flat.shape}")
    shape = tuple(shape)
    if int(np.prod(shape)) != stop - start:
        raise DimensionError(f"take: {stop - start} values cannot form shape {shape}")
    size = flat.shape[0]

    def vjp(g):
        full = np.zeros(size)
        full[start:stop] = g.ravel()
        return (full,)

    return flat.tape.record("take", [flat], flat.value[start:stop].reshape(shape).copy(), vjp)


def column(m: Var, k: int) -> Var:
    """矩阵第 k 列"""
    if m.value.ndim != 2 or not 0 <= k < m.shape[1]:
        raise DimensionError(f"column {k} out of range for {m.shape}")
    shape = m.shape

    def vjp(g):
        full = np.zeros(shape)
        full[:, k] = g
        return (full,)

    return m.tape.record("column", [m], m.value[:, k].copy(), vjp)


# ==================== 激活函数 ====================


def activation(x: Var, kind: Activation | str, alpha: float = 0.2) -> Var:
    """逐元素激活, relu 在 0 处的次梯度取 0"""
    kind = Activation(kind)
    v = x.value
    if kind is Activation.TANH:
        out = np.tanh(v)
        deriv = 1.0 - out * out
    elif kind is Activation.RELU:
        out = np.where(v > 0, v, 0.0)
        deriv = (v > 0).astype(np.float64)
    elif kind is Activation.LEAKY_RELU:
        out = np.where(v > 0, v, alpha * v)
        deriv = np.where(v > 0, 1.0, alpha)
    elif kind is Activation.SIGMOID:
        out = expit(v)
        deriv = out * (1.0 - out)
    else:
        raise ContractError(f"unknown activation {kind}")

    def vjp(g):
        return (g * deriv,)

    return x.tape.record(kind.value, [x], out, vjp)


def clip(x: Var, lo: float, hi: float) -> Var:
    """截断到 [lo, hi], 被截断处梯度为 0"""
    v = x.value
    inside = ((v >= lo) & (v <= hi)).astype(np.float64)

    def vjp(g):
        return (g * inside,)

    return x.tape.record("clip", [x], np.clip(v, lo, hi), vjp)


# ==================== 逐元素与归约 ====================


def add(a, b) -> Var:
    a, b = _lift(a, b)
    if a.shape != b.shape and a.value.size != 1 and b.value.size != 1:
        raise DimensionError(f"add shape mismatch: {a.shape} + {b.shape}")
    a_shape, b_shape = a.shape, b.shape

    def vjp(g):
        return _unbroadcast(g, a_shape), _unbroadcast(g, b_shape)

    return a.tape.record("add", [a, b], a.value + b.value, vjp)


def sub(a, b) -> Var:
    a, b = _lift(a, b)
    if a.shape != b.shape and a.value.size != 1 and b.value.size != 1:
        raise DimensionError(f"sub shape mismatch: {a.shape} - {b.shape}")
    a_shape, b_shape = a.shape, b.shape

    def vjp(g):
        return _unbroadcast(g, a_shape), -_unbroadcast(g, b_shape)

    return a.tape.record("sub", [a, b], a.value - b.value, vjp)


def mul(a, b) -> Var:
    """逐元素乘; 常数标量时只记录一个输入"""
    if not isinstance(a, Var):
        a, b = b, a
    if not isinstance(b, Var) and np.ndim(b) == 0:
        c = float(b)

        def vjp_const(g):
            return (g * c,)

        return a.tape.record("scale", [a], a.value * c, vjp_const)

    a, b = _lift(a, b)
    if a.shape != b.shape and a.value.size != 1 and b.value.size != 1:
        raise DimensionError(f"mul shape mismatch: {a.shape} * {b.shape}")
    av, bv = a.value, b.value
    a_shape, b_shape = a.shape, b.shape

    def vjp(g):
        return _unbroadcast(g * bv, a_shape), _unbroadcast(g * av, b_shape)

    return a.tape.record("mul", [a, b], av * bv, vjp)


def neg(x: Var) -> Var:
    def vjp(g):
        return (-g,)

    return x.tape.record("neg", [x], -x.value, vjp)


def square(x: Var) -> Var:
    v = x.value

    def vjp(g):
        return (2.0 * v * g,)

    return x.tape.record("square", [x], v * v, vjp)


def log(x: Var) -> Var:
    v = x.value
    if np.any(v <= 0):
        raise DomainError("log of non-positive value")

    def vjp(g):
        return (g / v,)

    return x.tape.record("log", [x], np.log(v), vjp)


def sum(x: Var) -> Var:  # noqa: A001
    shape = x.shape

    def vjp(g):
        return (np.full(shape, float(g)),)

    return x.tape.record("sum", [x], np.asarray(x.value.sum()), vjp)


def mean(x: Var) -> Var:
    """批均值, 即期望的估计"""
    shape = x.shape
    n = x.value.size
    if n == 0:
        raise ContractError("mean of an empty tensor")

    def vjp(g):
        return (np.full(shape, float(g) / n),)

    return x.tape.record("mean", [x], np.asarray(x.value.mean()), vjp)


def l1_distance(a: Var, b: Var) -> Var:
    """||a - b||_1, 相等处次梯度取 0"""
    a, b = _lift(a, b)
    if a.shape != b.shape:
        raise DimensionError(f"l1_distance shape mismatch: {a.shape} vs {b.shape}")
    diff = a.value - b.value
    sign = np.sign(diff)

    def vjp(g):
        gs = float(g) * sign
        return gs, -gs

    return a.tape.record("l1_distance", [a, b], np.asarray(np.abs(diff).sum()), vjp)


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if g.shape == shape:
        return g
    return np.asarray(g.sum()).reshape(shape)


# ==================== 参数截断 ====================


def clamp_params(theta, c: float):
    """
    WGAN 权重截断: 每个分量截到 [-c, c]

    Args:
        theta: ParamVector (返回新 ParamVector), Tensor 或数组
        c: 截断常数, 必须为正
    """
    if not c > 0:
        raise ContractError(f"clip constant must be positive, got {c}")
    if hasattr(theta, "with_values"):
        return theta.with_values(np.clip(theta.values, -c, c))
    if isinstance(theta, Tensor):
        return Tensor(np.clip(theta.data, -c, c))
    return np.clip(np.asarray(theta, dtype=np.float64), -c, c)
