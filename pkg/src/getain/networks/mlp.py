"""MLP 生成器/判别器与一维参数向量"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import expit

from ..autodiff import Tape, Var, ops
from ..autodiff.tensor import as_array
from ..common.cons import Activation, OutputActivation
from ..common.exceptions import ContractError, DimensionError, DomainError


@dataclass(frozen=True)
class MlpSpec:
    """网络结构: 层宽 (第一个为输入宽度), 隐藏层激活, 输出激活"""

    layer_sizes: tuple[int, ...]
    hidden_activation: Activation = Activation.TANH
    output_activation: OutputActivation = OutputActivation.NONE
    leaky_alpha: float = 0.2
    first_layer_linear: bool = False  # GM-GAN 的隐变量线性层

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2:
            raise ContractError(f"an MLP needs at least 2 layer sizes, got {sizes}")
        if any(s <= 0 for s in sizes):
            raise ContractError(f"layer sizes must be positive, got {sizes}")
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "hidden_activation", Activation(self.hidden_activation))
        object.__setattr__(self, "output_activation", OutputActivation(self.output_activation))

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1

    def layer_shapes(self) -> list[tuple[int, int]]:
        return list(zip(self.layer_sizes[:-1], self.layer_sizes[1:]))

    def layer_offsets(self) -> list[tuple[int, int, int]]:
        """每层 (W 起点, b 起点, b 终点) 在一维向量中的位置"""
        offsets = []
        pos = 0
        for n_in, n_out in self.layer_shapes():
            w_start = pos
            b_start = w_start + n_in * n_out
            pos = b_start + n_out
            offsets.append((w_start, b_start, pos))
        return offsets

    def first_bias_slice(self) -> slice:
        _, b_start, b_stop = self.layer_offsets()[0]
        return slice(b_start, b_stop)

    def with_widths(self, hidden: int) -> "MlpSpec":
        """保持深度与输入/输出宽度, 所有隐藏层改为同一宽度"""
        sizes = (self.layer_sizes[0],) + (hidden,) * (len(self.layer_sizes) - 2) + (self.layer_sizes[-1],)
        return MlpSpec(sizes, self.hidden_activation, self.output_activation, self.leaky_alpha, self.first_layer_linear)

    def to_text(self) -> str:
        flags = "linear_first" if self.first_layer_linear else ""
        return ";".join(
            [
                ",".join(str(s) for s in self.layer_sizes),
                self.hidden_activation.value,
                self.output_activation.value,
                repr(float(self.leaky_alpha)),
                flags,
            ]
        )

    @classmethod
    def from_text(cls, text: str) -> "MlpSpec":
        parts = text.strip().split(";")
        if len(parts) != 5:
            raise ContractError(f"malformed spec text {text!r}")
        sizes, hidden, output, alpha, flags = parts
        return cls(
            tuple(int(s) for s in sizes.split(",")),
            Activation(hidden),
            OutputActivation(output),
            float(alpha),
            flags == "linear_first",
        )


def param_count(spec: MlpSpec) -> int:
    """稠密层参数总数 (含偏置)"""
    return sum(n_in * n_out + n_out for n_in, n_out in spec.layer_shapes())


@dataclass
class ParamVector:
    """按 spec 展开的一维参数向量, 训练时由唯一的训练器原地更新"""

    values: np.ndarray
    spec: MlpSpec = field(compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.shape[0] != param_count(self.spec):
            raise DimensionError(
                f"parameter vector of length {self.values.size} does not match spec ({param_count(self.spec)})"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("parameter vector has non-finite entries")

    def __len__(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamVector):
            return NotImplemented
        return self.spec == other.spec and bool(np.array_equal(self.values, other.values))

    def copy(self) -> "ParamVector":
        return ParamVector(self.values.copy(), self.spec)

    def with_values(self, values: np.ndarray) -> "ParamVector":
        return ParamVector(np.array(values, dtype=np.float64), self.spec)

    def layers(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """展开为 [(W[n_in×n_out], b[n_out]), ...] (视图)"""
        out = []
        for (n_in, n_out), (w_start, b_start, b_stop) in zip(self.spec.layer_shapes(), self.spec.layer_offsets()):
            out.append((self.values[w_start:b_start].reshape(n_in, n_out), self.values[b_start:b_stop]))
        return out

    @classmethod
    def from_layers(cls, layers: Sequence[tuple[np.ndarray, np.ndarray]], spec: MlpSpec) -> "ParamVector":
        flat = []
        for (n_in, n_out), (w, b) in zip(spec.layer_shapes(), layers):
            w = np.asarray(w, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            if w.shape != (n_in, n_out) or b.shape != (n_out,):
                raise DimensionError(f"layer shapes {w.shape}/{b.shape} do not match ({n_in}, {n_out})")
            flat.extend([w.ravel(), b])
        if len(layers) != spec.n_layers:
            raise DimensionError(f"expected {spec.n_layers} layers, got {len(layers)}")
        return cls(np.concatenate(flat), spec)

    @classmethod
    def zeros(cls, spec: MlpSpec) -> "ParamVector":
        return cls(np.zeros(param_count(spec)), spec)


def init_params(spec: MlpSpec, rng: np.random.Generator) -> ParamVector:
    """每层 uniform(-1/sqrt(n_in), 1/sqrt(n_in)) 初始化"""
    layers = []
    for n_in, n_out in spec.layer_shapes():
        bound = 1.0 / np.sqrt(n_in)
        w = rng.uniform(-bound, bound, size=(n_in, n_out))
        b = rng.uniform(-bound, bound, size=n_out)
        layers.append((w, b))
    return ParamVector.from_layers(layers, spec)


# ==================== 前向传播 (numpy) ====================


def _hidden(h: np.ndarray, spec: MlpSpec) -> np.ndarray:
    kind = spec.hidden_activation
    if kind is Activation.TANH:
        return np.tanh(h)
    if kind is Activation.RELU:
        return np.where(h > 0, h, 0.0)
    if kind is Activation.LEAKY_RELU:
        return np.where(h > 0, h, spec.leaky_alpha * h)
    return expit(h)


def _output(h: np.ndarray, spec: MlpSpec) -> np.ndarray:
    kind = spec.output_activation
    if kind is OutputActivation.SIGMOID:
        return expit(h)
    if kind is OutputActivation.TANH:
        return np.tanh(h)
    return h


def forward(theta: ParamVector, x) -> np.ndarray:
    x = as_array(x)
    spec = theta.spec
    if x.ndim != 2 or x.shape[1] != spec.input_size:
        raise DimensionError(f"input shape {x.shape} does not match spec input {spec.input_size}")
    h = x
    last = spec.n_layers - 1
    for i, (w, b) in enumerate(theta.layers()):
        h = h @ w + b
        if i == last:
            h = _output(h, spec)
        elif not (i == 0 and spec.first_layer_linear):
            h = _hidden(h, spec)
    return h


def forward_generator(theta_g: ParamVector, z) -> np.ndarray:
    """G: R^l -> R^p"""
    return forward(theta_g, z)


def forward_critic(theta_d: ParamVector, x) -> np.ndarray:
    """D: R^p -> (0,1) (sigmoid 头) 或 R (WGAN 头), 输出 [batch×1]"""
    if theta_d.spec.output_size != 1:
        raise DimensionError(f"critic must have a single output, spec has {theta_d.spec.output_size}")
    return forward(theta_d, x)


# ==================== 前向传播 (tape) ====================


class Network:
    """绑定到 tape 的网络: 每层 (W, b) 都是 Var, 可单独替换 (cGAN/GM-GAN 视图)"""

    def __init__(self, spec: MlpSpec, layers: list[tuple[Var, Var]]):
        if len(layers) != spec.n_layers:
            raise DimensionError(f"expected {spec.n_layers} layers, got {len(layers)}")
        self.spec = spec
        self.layers = layers

    @property
    def tape(self) -> Tape:
        return self.layers[0][0].tape

    @classmethod
    def bind(
        cls,
        flat: Var,
        spec: MlpSpec,
        first_bias: Optional[Var] = None,
    ) -> "Network":
        """从一维参数 Var 切出各层; first_bias 不为 None 时替换第一层偏置"""
        layers = []
        for i, ((n_in, n_out), (w_start, b_start, b_stop)) in enumerate(
            zip(spec.layer_shapes(), spec.layer_offsets())
        ):
            w = ops.take(flat, w_start, b_start, (n_in, n_out))
            if i == 0 and first_bias is not None:
                if first_bias.shape != (n_out,):
                    raise DimensionError(f"first bias shape {first_bias.shape} does not match ({n_out},)")
                b = first_bias
            else:
                b = ops.take(flat, b_start, b_stop, (n_out,))
            layers.append((w, b))
        return cls(spec, layers)

    def __call__(self, x: Var) -> Var:
        spec = self.spec
        if x.value.ndim != 2 or x.shape[1] != spec.input_size:
            raise DimensionError(f"input shape {x.shape} does not match spec input {spec.input_size}")
        h = x
        last = spec.n_layers - 1
        for i, (w, b) in enumerate(self.layers):
            h = ops.add_bias(ops.matmul(h, w), b)
            if i == last:
                if spec.output_activation is OutputActivation.SIGMOID:
                    h = ops.activation(h, Activation.SIGMOID)
                elif spec.output_activation is OutputActivation.TANH:
                    h = ops.activation(h, Activation.TANH)
            elif not (i == 0 and spec.first_layer_linear):
                h = ops.activation(h, spec.hidden_activation, spec.leaky_alpha)
        return h


def bind_params(tape: Tape, theta: ParamVector, name: str = "") -> tuple[Var, Network]:
    """把参数向量登记为 tape 叶子并绑定网络"""
    leaf = tape.parameter(theta.values, name=name)
    return leaf, Network.bind(leaf, theta.spec)
