"""价值函数与集成目标"""

from .hybrid import (
    CouplingSpec,
    ObjectiveGraph,
    cgan_graph,
    ensemble_value,
    gmgan_graph,
    hybrid_graph,
    hybrid_objective,
    l1_coupling,
    l1_coupling_var,
    member_graph,
    model_graph,
    pairwise_l1,
    pooled_value,
    tied_graph,
)
from .values import Batch, ValueGrads, check_head, gan_value, value, value_and_grads, value_var, wgan_value

__all__ = [
    "Batch",
    "ValueGrads",
    "check_head",
    "gan_value",
    "wgan_value",
    "value",
    "value_var",
    "value_and_grads",
    "CouplingSpec",
    "ObjectiveGraph",
    "l1_coupling",
    "l1_coupling_var",
    "pairwise_l1",
    "ensemble_value",
    "hybrid_objective",
    "pooled_value",
    "member_graph",
    "hybrid_graph",
    "tied_graph",
    "cgan_graph",
    "gmgan_graph",
    "model_graph",
]
