"""训练配置"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..common.cons import Activation, CouplingUpdate, OptimizerKind, OutputActivation, SharingMode, ValueKind
from ..common.exceptions import ContractError
from ..networks.mlp import MlpSpec
from ..objectives.values import check_head


def default_generator_spec(latent: int = 2, hidden: int = 32, depth: int = 2, data_dim: int = 2) -> MlpSpec:
    """tanh 隐藏层, 线性输出"""
    return MlpSpec((latent,) + (hidden,) * depth + (data_dim,), Activation.TANH, OutputActivation.NONE)


def default_critic_spec(kind: ValueKind, hidden: int = 32, depth: int = 2, data_dim: int = 2) -> MlpSpec:
    """leaky_relu(0.2) 隐藏层; vanilla 加 sigmoid 头"""
    head = OutputActivation.SIGMOID if ValueKind(kind) is ValueKind.VANILLA else OutputActivation.NONE
    return MlpSpec((data_dim,) + (hidden,) * depth + (1,), Activation.LEAKY_RELU, head, leaky_alpha=0.2)


@dataclass(frozen=True)
class TrainConfig:
    """
    一次训练的全部超参数

    wasserstein 默认 rmsprop(0.99), lr 5e-4, n_critic 5, c = 0.01;
    vanilla 默认 sgd, lr 1e-3, n_critic 1。用 `TrainConfig.defaults(kind)` 取得。
    l1 耦合默认按近端映射更新, 小 lam 也不会被自适应步长放大。
    """

    mode: SharingMode = SharingMode.SINGLE
    value_kind: ValueKind = ValueKind.WASSERSTEIN
    epochs: int = 1000
    batch_size: int = 64
    n_critic: int = 5
    learning_rate: float = 5e-4
    optimizer: OptimizerKind = OptimizerKind.RMSPROP
    rmsprop_decay: float = 0.99
    rmsprop_eps: float = 1e-8
    clip_c: float = 0.01
    lam: float = 0.0
    seed: int = 0
    coupling_update: CouplingUpdate = CouplingUpdate.PROXIMAL
    eval_interval: int = 100
    show_progress: bool = False
    workers: int = 1
    g_spec: MlpSpec = field(default_factory=default_generator_spec)
    d_spec: MlpSpec = None

    def __post_init__(self):
        object.__setattr__(self, "mode", SharingMode(self.mode))
        object.__setattr__(self, "value_kind", ValueKind(self.value_kind))
        object.__setattr__(self, "optimizer", OptimizerKind(self.optimizer))
        object.__setattr__(self, "coupling_update", CouplingUpdate(self.coupling_update))
        if self.d_spec is None:
            object.__setattr__(self, "d_spec", default_critic_spec(self.value_kind))

        for name in ("epochs", "batch_size", "n_critic", "eval_interval", "workers"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be >= 1, got {getattr(self, name)}")
        # lr = 0 冻结参数, 用于恒等性检查
        if not np.isfinite(self.learning_rate) or self.learning_rate < 0:
            raise ContractError(f"learning_rate must be finite and >= 0, got {self.learning_rate}")
        if not 0 <= self.rmsprop_decay < 1:
            raise ContractError(f"rmsprop decay must be in [0, 1), got {self.rmsprop_decay}")
        if self.rmsprop_eps <= 0:
            raise ContractError(f"rmsprop eps must be positive, got {self.rmsprop_eps}")
        if self.value_kind is ValueKind.WASSERSTEIN and not self.clip_c > 0:
            raise ContractError(f"clip constant must be positive, got {self.clip_c}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ContractError(f"lambda must be finite and >= 0, got {self.lam}")
        if self.lam > 0 and self.mode is not SharingMode.L1:
            raise ContractError(f"lambda > 0 needs mode l1, got {self.mode.value}")
        if self.g_spec.output_size != self.d_spec.input_size:
            raise ContractError(
                f"generator output {self.g_spec.output_size} does not match critic input {self.d_spec.input_size}"
            )
        check_head(self.d_spec, self.value_kind)

    @classmethod
    def defaults(cls, kind: ValueKind = ValueKind.WASSERSTEIN, **overrides) -> "TrainConfig":
        kind = ValueKind(kind)
        if kind is ValueKind.WASSERSTEIN:
            base = dict(optimizer=OptimizerKind.RMSPROP, learning_rate=5e-4, n_critic=5)
        else:
            base = dict(optimizer=OptimizerKind.SGD, learning_rate=1e-3, n_critic=1)
        base.update(value_kind=kind)
        if "d_spec" not in overrides:
            base["d_spec"] = default_critic_spec(kind)
        base.update(overrides)
        return cls(**base)

    def with_overrides(self, **changes) -> "TrainConfig":
        return replace(self, **changes)

    @property
    def latent_size(self) -> int:
        return self.g_spec.input_size
