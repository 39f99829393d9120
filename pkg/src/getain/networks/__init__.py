"""生成器/判别器网络与集成视图"""

from .budget import dcgan_param_count, equivalent_spec, equivalent_width
from .checkpoint import load_checkpoint, save_checkpoint
from .ensemble import (
    EnsembleModel,
    cgan_member,
    conditional_network,
    gmgan_member,
    gmgan_spec,
    single_model,
    tied_model,
)
from .mlp import (
    MlpSpec,
    Network,
    ParamVector,
    bind_params,
    forward,
    forward_critic,
    forward_generator,
    init_params,
    param_count,
)

__all__ = [
    "MlpSpec",
    "ParamVector",
    "Network",
    "bind_params",
    "forward",
    "forward_generator",
    "forward_critic",
    "init_params",
    "param_count",
    "EnsembleModel",
    "cgan_member",
    "conditional_network",
    "gmgan_member",
    "gmgan_spec",
    "single_model",
    "tied_model",
    "equivalent_width",
    "equivalent_spec",
    "dcgan_param_count",
    "save_checkpoint",
    "load_checkpoint",
]
