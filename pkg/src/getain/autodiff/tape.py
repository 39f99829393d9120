"""
反向模式自动微分的计算图

Tape 按构造顺序追加节点, 每个节点的输入都是更早的节点, 因此节点列表本身就是拓扑序。
backward 从根节点逆序扫描一次, 每个节点只访问一次, 共享子表达式的梯度自动累加。

使用示例:
    tape = Tape()
    w = tape.parameter(np.ones((2, 2)))
    x = tape.constant(np.eye(2))
    loss = ops.mean(ops.matmul(x, w))
    grads = tape.backward(loss)
    grads[w]
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..common.exceptions import ContractError
from .tensor import Tensor, as_array

VjpFn = Callable[[np.ndarray], Sequence[np.ndarray]]


@dataclass
class Node:
    """计算图节点"""

    op: str
    inputs: tuple[int, ...]
    value: np.ndarray
    vjp: Optional[VjpFn] = None  # 叶子节点为 None
    name: str = ""

    @property
    def is_leaf(self) -> bool:
        return not self.inputs


class Var:
    """Tape 上某个节点的句柄"""

    __slots__ = ("tape", "index")

    def __init__(self, tape: "Tape", index: int):
        self.tape = tape
        self.index = index

    @property
    def node(self) -> Node:
        return self.tape.nodes[self.index]

    @property
    def value(self) -> np.ndarray:
        return self.node.value

    @property
    def shape(self) -> tuple[int, ...]:
        return self.node.value.shape

    def item(self) -> float:
        return float(self.node.value)

    def tensor(self) -> Tensor:
        return Tensor(self.node.value)

    # ==================== 标量运算 ====================

    def __add__(self, other):
        from . import ops

        return ops.add(self, other)

    def __radd__(self, other):
        from . import ops

        return ops.add(other, self)

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, other)

    def __rmul__(self, other):
        from . import ops

        return ops.mul(other, self)

    def __truediv__(self, other):
        from . import ops

        if isinstance(other, Var):
            raise ContractError("division by a Var is not supported")
        return ops.mul(self, 1.0 / float(other))

    def __neg__(self):
        from . import ops

        return ops.neg(self)

    def __repr__(self) -> str:
        node = self.node
        return f"Var(#{self.index} {node.op} shape={node.value.shape})"


class Gradients:
    """backward 的结果, 按 Var 或节点编号取梯度"""

    def __init__(self, tape: "Tape", grads: list[Optional[np.ndarray]]):
        self._tape = tape
        self._grads = grads

    def __getitem__(self, var: Var | int) -> np.ndarray:
        index = var.index if isinstance(var, Var) else int(var)
        g = self._grads[index]
        if g is None:
            # 不在根节点路径上的节点梯度为 0
            return np.zeros_like(self._tape.nodes[index].value)
        return g

    def leaves(self) -> dict[int, np.ndarray]:
        return {i: self[i] for i, node in enumerate(self._tape.nodes) if node.is_leaf}


class Tape:
    """追加式计算图, 单线程构造与反向传播"""

    def __init__(self):
        self.nodes: list[Node] = []
        self.gradients: Optional[Gradients] = None

    def __len__(self) -> int:
        return len(self.nodes)

    def _append(self, node: Node) -> Var:
        self.nodes.append(node)
        return Var(self, len(self.nodes) - 1)

    def parameter(self, value, name: str = "") -> Var:
        """可求导的叶子"""
        return self._append(Node("parameter", (), np.array(as_array(value), dtype=np.float64), name=name))

    def constant(self, value, name: str = "") -> Var:
        """常量叶子 (梯度照常计算, 调用方忽略即可)"""
        return self._append(Node("constant", (), np.array(as_array(value), dtype=np.float64), name=name))

    def lift(self, x) -> Var:
        if isinstance(x, Var):
            if x.tape is not self:
                raise ContractError("Var belongs to a different tape")
            return x
        return self.constant(x)

    def record(self, op: str, inputs: Sequence[Var], value: np.ndarray, vjp: VjpFn) -> Var:
        """追加运算节点, 输入必须是本 tape 上已有的节点"""
        ids = []
        for var in inputs:
            if var.tape is not self:
                raise ContractError(f"{op}: input belongs to a different tape")
            if not 0 <= var.index < len(self.nodes):
                raise ContractError(f"{op}: input #{var.index} does not exist yet")
            ids.append(var.index)
        return self._append(Node(op, tuple(ids), value, vjp))

    def backward(self, root: Var) -> Gradients:
        """从标量根节点逆拓扑序传播梯度"""
        if root.tape is not self:
            raise ContractError("root belongs to a different tape")
        if root.value.size != 1 or root.value.ndim > 1:
            raise ContractError(f"backward requires a scalar root, got shape {root.shape}")

        grads: list[Optional[np.ndarray]] = [None] * len(self.nodes)
        grads[root.index] = np.ones_like(root.value)
        for i in range(root.index, -1, -1):
            g = grads[i]
            node = self.nodes[i]
            if g is None or node.vjp is None:
                continue
            for inp, contribution in zip(node.inputs, node.vjp(g)):
                if grads[inp] is None:
                    grads[inp] = np.array(contribution, dtype=np.float64)
                else:
                    grads[inp] = grads[inp] + contribution
        self.gradients = Gradients(self, grads)
        return self.gradients
