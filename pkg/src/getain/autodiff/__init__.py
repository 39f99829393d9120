"""最小的稠密张量反向模式自动微分"""

from . import ops
from .ops import (
    activation,
    add,
    add_bias,
    clamp_params,
    clip,
    column,
    l1_distance,
    log,
    matmul,
    mean,
    mul,
    neg,
    square,
    sub,
    take,
    transpose,
)
from .tape import Gradients, Node, Tape, Var
from .tensor import Tensor, as_array

__all__ = [
    "ops",
    "Tensor",
    "as_array",
    "Tape",
    "Var",
    "Node",
    "Gradients",
    "matmul",
    "add_bias",
    "activation",
    "clip",
    "column",
    "take",
    "transpose",
    "add",
    "sub",
    "mul",
    "neg",
    "square",
    "log",
    "mean",
    "l1_distance",
    "clamp_params",
]
