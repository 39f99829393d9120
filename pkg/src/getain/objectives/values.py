"""
价值函数

- vanilla: V = mean log D(x) + mean log(1 - D(G(z))), D 输出先截断到 [eps, 1 - eps]
- wasserstein: V = mean D(x) - mean D(G(z))

生成器最小化 V, 判别器最大化 V。
"""

from typing import NamedTuple

import numpy as np

from ..autodiff import Tape, Var, ops
from ..autodiff.tensor import as_array
from ..common.cons import OutputActivation, ValueKind
from ..common.exceptions import ContractError, DimensionError
from ..common.settings import SIGMOID_EPS
from ..networks.mlp import MlpSpec, Network, ParamVector, bind_params


class Batch(NamedTuple):
    """一个类别 (或整体) 的一次采样: 真实样本 [n×p] 与隐变量 [m×l]"""

    real: np.ndarray
    z: np.ndarray


class ValueGrads(NamedTuple):
    value: float
    grad_g: np.ndarray
    grad_d: np.ndarray


def check_head(d_spec: MlpSpec, kind: ValueKind) -> None:
    """vanilla 需要 sigmoid 头, wasserstein 需要线性头"""
    kind = ValueKind(kind)
    if d_spec.output_size != 1:
        raise ContractError(f"critic must have a single output, got {d_spec.output_size}")
    expected = OutputActivation.SIGMOID if kind is ValueKind.VANILLA else OutputActivation.NONE
    if d_spec.output_activation is not expected:
        raise ContractError(
            f"{kind.value} value needs a {expected.value} critic head, got {d_spec.output_activation.value}"
        )


def check_batch(batch: Batch, g_spec: MlpSpec) -> Batch:
    real = as_array(batch.real)
    z = as_array(batch.z)
    if real.ndim != 2 or real.shape[0] == 0:
        raise ContractError(f"real batch must be a non-empty matrix, got shape {real.shape}")
    if z.ndim != 2 or z.shape[0] == 0:
        raise ContractError(f"latent batch must be a non-empty matrix, got shape {z.shape}")
    if real.shape[1] != g_spec.output_size:
        raise DimensionError(f"real batch width {real.shape[1]} does not match generator output {g_spec.output_size}")
    if z.shape[1] != g_spec.input_size:
        raise DimensionError(f"latent batch width {z.shape[1]} does not match generator input {g_spec.input_size}")
    return Batch(real, z)


# ==================== tape 上的价值函数 ====================


def value_var(kind: ValueKind, G: Network, D: Network, batch: Batch) -> Var:
    """在 G/D 所在的 tape 上记录 V"""
    kind = ValueKind(kind)
    tape = G.tape
    real = tape.constant(batch.real)
    z = tape.constant(batch.z)
    d_real = D(real)
    d_fake = D(G(z))
    if kind is ValueKind.WASSERSTEIN:
        return ops.sub(ops.mean(d_real), ops.mean(d_fake))
    d_real = ops.clip(d_real, SIGMOID_EPS, 1.0 - SIGMOID_EPS)
    d_fake = ops.clip(d_fake, SIGMOID_EPS, 1.0 - SIGMOID_EPS)
    return ops.add(ops.mean(ops.log(d_real)), ops.mean(ops.log(ops.sub(1.0, d_fake))))


def value_and_grads(kind: ValueKind, theta_g: ParamVector, theta_d: ParamVector, batch: Batch) -> ValueGrads:
    """V 及其对 theta_G, theta_D 的梯度"""
    check_head(theta_d.spec, kind)
    batch = check_batch(batch, theta_g.spec)
    tape = Tape()
    g_leaf, G = bind_params(tape, theta_g, "theta_G")
    d_leaf, D = bind_params(tape, theta_d, "theta_D")
    v = value_var(kind, G, D, batch)
    grads = tape.backward(v)
    return ValueGrads(v.item(), grads[g_leaf].copy(), grads[d_leaf].copy())


# ==================== 数值接口 ====================


def _value(kind: ValueKind, theta_g: ParamVector, theta_d: ParamVector, real, z) -> float:
    check_head(theta_d.spec, kind)
    batch = check_batch(Batch(real, z), theta_g.spec)
    tape = Tape()
    _, G = bind_params(tape, theta_g)
    _, D = bind_params(tape, theta_d)
    return value_var(kind, G, D, batch).item()


def gan_value(theta_g: ParamVector, theta_d: ParamVector, real_batch, z_batch) -> float:
    """交叉熵 GAN 价值"""
    return _value(ValueKind.VANILLA, theta_g, theta_d, real_batch, z_batch)


def wgan_value(theta_g: ParamVector, theta_d: ParamVector, real_batch, z_batch) -> float:
    return _value(ValueKind.WASSERSTEIN, theta_g, theta_d, real_batch, z_batch)


def value(kind: ValueKind, theta_g: ParamVector, theta_d: ParamVector, real_batch, z_batch) -> float:
    return _value(ValueKind(kind), theta_g, theta_d, real_batch, z_batch)
