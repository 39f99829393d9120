"""
集成模型与三种结构视图

- 自由成员: independent / l1 模式下每个成员各有一对参数
- tied: 所有成员引用同一对 ParamVector
- cGAN 视图: 成员只在第一层偏置上不同 (偏置取自矩阵 B 的第 k 列)
- GM-GAN 视图: 成员只在生成器第一层 (W_k, b_k) 上不同, x = W_k z + b_k
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..autodiff.tensor import as_array
from ..common.cons import SharingMode
from ..common.exceptions import ContractError, DimensionError
from ..utils.logger import get_logger
from .mlp import MlpSpec, ParamVector

log = get_logger()


# ==================== 结构视图 ====================


def _check_bias_matrix(theta: ParamVector, B: np.ndarray, name: str) -> int:
    width = theta.spec.layer_sizes[1]
    if B.ndim != 2 or B.shape[0] != width:
        raise DimensionError(f"{name} must have shape ({width}, K), got {B.shape}")
    return B.shape[1]


def cgan_member(
    shared_g: ParamVector,
    shared_d: ParamVector,
    B_g,
    B_d,
    k: int,
) -> tuple[ParamVector, ParamVector]:
    """共享参数 + 第一层偏置替换为 B 的第 k 列"""
    B_g = as_array(B_g)
    B_d = as_array(B_d)
    K = _check_bias_matrix(shared_g, B_g, "B_G")
    if _check_bias_matrix(shared_d, B_d, "B_D") != K:
        raise DimensionError(f"B_G has {K} columns but B_D has {B_d.shape[1]}")
    if not 0 <= k < K:
        raise ContractError(f"member index {k} out of range [0, {K})")

    g = shared_g.values.copy()
    g[shared_g.spec.first_bias_slice()] = B_g[:, k]
    d = shared_d.values.copy()
    d[shared_d.spec.first_bias_slice()] = B_d[:, k]
    return ParamVector(g, shared_g.spec), ParamVector(d, shared_d.spec)


def conditional_network(shared: ParamVector, B) -> ParamVector:
    """
    显式的拼接输入条件网络: 输入 [x, y_onehot], 第一层权重 [W; B^T], 第一层偏置为 0

    对 one-hot y = e_k, 第一层预激活为 W x + B[:, k], 与 cgan_member(k) 的第一层一致。
    """
    B = as_array(B)
    K = _check_bias_matrix(shared, B, "B")
    spec = shared.spec
    cond_spec = MlpSpec(
        (spec.input_size + K,) + spec.layer_sizes[1:],
        spec.hidden_activation,
        spec.output_activation,
        spec.leaky_alpha,
        spec.first_layer_linear,
    )
    layers = [(w.copy(), b.copy()) for w, b in shared.layers()]
    w0, b0 = layers[0]
    layers[0] = (np.vstack([w0, B.T]), np.zeros_like(b0))
    return ParamVector.from_layers(layers, cond_spec)


def gmgan_spec(tail: MlpSpec) -> MlpSpec:
    latent = tail.input_size
    return MlpSpec(
        (latent,) + tail.layer_sizes,
        tail.hidden_activation,
        tail.output_activation,
        tail.leaky_alpha,
        first_layer_linear=True,
    )


def gmgan_member(shared_g_tail: ParamVector, W_k, b_k, k: int) -> ParamVector:
    """成员 = 隐变量线性层 (W_k, b_k) 接共享尾部"""
    W_k = as_array(W_k)
    b_k = as_array(b_k)
    latent = shared_g_tail.spec.input_size
    if W_k.shape != (latent, latent) or b_k.shape != (latent,):
        raise DimensionError(
            f"member {k}: latent layer must be ({latent}, {latent}) and ({latent},), got {W_k.shape} and {b_k.shape}"
        )
    # 行批次约定 h = z @ A + b, 因此存 A = W_k^T
    values = np.concatenate([W_k.T.ravel(), b_k, shared_g_tail.values])
    return ParamVector(values, gmgan_spec(shared_g_tail.spec))


# ==================== 集成模型 ====================


@dataclass
class EnsembleModel:
    """
    K 个 (G_k, D_k) 成员 + 混合权重 pi + 共享方式

    generators/critics 在 independent/l1 模式下各有 K 个, 在 tied/cgan/gmgan/single
    模式下只有 1 个共享参数; cgan 额外持有 bias_g/bias_d, gmgan 持有 latent_w/latent_b。
    """

    g_spec: MlpSpec
    d_spec: MlpSpec
    mode: SharingMode
    pi: np.ndarray
    generators: list[ParamVector]
    critics: list[ParamVector]
    lam: float = 0.0
    bias_g: Optional[np.ndarray] = None
    bias_d: Optional[np.ndarray] = None
    latent_w: Optional[np.ndarray] = None  # [K×l×l]
    latent_b: Optional[np.ndarray] = None  # [K×l]
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mode = SharingMode(self.mode)
        self.pi = np.asarray(self.pi, dtype=np.float64)
        if self.pi.ndim != 1 or self.pi.size == 0 or np.any(self.pi < 0) or not np.isclose(self.pi.sum(), 1.0):
            raise ContractError(f"mixture weights must be non-negative and sum to 1, got {self.pi}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ContractError(f"lambda must be finite and >= 0, got {self.lam}")

        expected = self.K if self.mode in (SharingMode.INDEPENDENT, SharingMode.L1) else 1
        if len(self.generators) != expected or len(self.critics) != expected:
            raise ContractError(
                f"mode {self.mode.value} expects {expected} generator/critic vectors, "
                f"got {len(self.generators)}/{len(self.critics)}"
            )
        for theta in self.generators:
            if theta.spec != self.g_spec:
                raise ContractError("all generator specs must be identical")
        for theta in self.critics:
            if theta.spec != self.d_spec:
                raise ContractError("all critic specs must be identical")

        if self.mode is SharingMode.CGAN:
            if self.bias_g is None or self.bias_d is None:
                raise ContractError("cgan mode requires bias matrices")
            _check_bias_matrix(self.generators[0], self.bias_g, "B_G")
            _check_bias_matrix(self.critics[0], self.bias_d, "B_D")
            if self.bias_g.shape[1] != self.K or self.bias_d.shape[1] != self.K:
                raise DimensionError(f"bias matrices must have K={self.K} columns")
        if self.mode is SharingMode.GMGAN:
            latent = self.g_spec.input_size
            if self.latent_w is None or self.latent_b is None:
                raise ContractError("gmgan mode requires latent layers")
            if self.latent_w.shape != (self.K, latent, latent) or self.latent_b.shape != (self.K, latent):
                raise DimensionError(f"latent layers must be ({self.K}, {latent}, {latent}) and ({self.K}, {latent})")
        if self.mode is SharingMode.SINGLE and self.K != 1:
            raise ContractError("single mode has exactly one member")

    @property
    def K(self) -> int:
        return int(self.pi.size)

    @property
    def latent_size(self) -> int:
        return self.g_spec.input_size

    def member(self, k: int) -> tuple[ParamVector, ParamVector]:
        """第 k 个成员的 (theta_G, theta_D); tied 模式返回同一对对象"""
        if not 0 <= k < self.K:
            raise ContractError(f"member index {k} out of range [0, {self.K})")
        if self.mode in (SharingMode.INDEPENDENT, SharingMode.L1):
            return self.generators[k], self.critics[k]
        if self.mode is SharingMode.CGAN:
            return cgan_member(self.generators[0], self.critics[0], self.bias_g, self.bias_d, k)
        if self.mode is SharingMode.GMGAN:
            return gmgan_member(self.generators[0], self.latent_w[k], self.latent_b[k], k), self.critics[0]
        return self.generators[0], self.critics[0]

    def member_generator(self, k: int) -> ParamVector:
        return self.member(k)[0]

    def member_generators(self) -> list[ParamVector]:
        return [self.member(k)[0] for k in range(self.K)]

    def member_critics(self) -> list[ParamVector]:
        return [self.member(k)[1] for k in range(self.K)]

    def snapshot(self) -> "EnsembleModel":
        """只读快照, 可交给评估线程"""
        copies_g = [g.copy() for g in self.generators]
        copies_d = [d.copy() for d in self.critics]
        return EnsembleModel(
            g_spec=self.g_spec,
            d_spec=self.d_spec,
            mode=self.mode,
            pi=self.pi.copy(),
            generators=copies_g,
            critics=copies_d,
            lam=self.lam,
            bias_g=None if self.bias_g is None else self.bias_g.copy(),
            bias_d=None if self.bias_d is None else self.bias_d.copy(),
            latent_w=None if self.latent_w is None else self.latent_w.copy(),
            latent_b=None if self.latent_b is None else self.latent_b.copy(),
            seed=self.seed,
            meta=dict(self.meta),
        )

    def total_generator_params(self) -> int:
        return sum(len(g) for g in self.generators) + sum(
            0 if a is None else a.size for a in (self.bias_g, self.latent_w, self.latent_b)
        )


def tied_model(theta_g: ParamVector, theta_d: ParamVector, pi, **kwargs) -> EnsembleModel:
    """tied 模式: K 个成员引用同一对参数"""
    return EnsembleModel(theta_g.spec, theta_d.spec, SharingMode.TIED, pi, [theta_g], [theta_d], **kwargs)


def single_model(theta_g: ParamVector, theta_d: ParamVector, **kwargs) -> EnsembleModel:
    return EnsembleModel(theta_g.spec, theta_d.spec, SharingMode.SINGLE, np.ones(1), [theta_g], [theta_d], **kwargs)
