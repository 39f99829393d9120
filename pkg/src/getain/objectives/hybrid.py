"""
集成目标

- ensemble: K 个互不相关的 V(theta_Gk, theta_Dk; batch_k)
- l1 耦合: lam * sum_{j<k} ||theta_j - theta_k||_1 (全部无序对)
- hybrid: 生成器最小化 sum V + lam * C(theta_G), 判别器最大化 sum V - lam * C(theta_D)
- tied / cgan / gmgan: 共享参数上的各类别价值之和

所有耦合项都在同一步开始时的参数快照上求值。
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ..autodiff import Tape, Var, ops
from ..common.cons import SharingMode, ValueKind
from ..common.exceptions import ContractError, DimensionError
from ..networks.ensemble import EnsembleModel
from ..networks.mlp import MlpSpec, Network, ParamVector
from .values import Batch, check_batch, check_head, value_var


@dataclass(frozen=True)
class CouplingSpec:
    lam: float
    K: int

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ContractError(f"lambda must be finite and >= 0, got {self.lam}")
        if self.K < 1:
            raise ContractError(f"K must be positive, got {self.K}")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.K), 2))


def _check_same_spec(params: Sequence[ParamVector]) -> None:
    if not params:
        raise ContractError("coupling needs at least one parameter vector")
    spec = params[0].spec
    for theta in params[1:]:
        if theta.spec != spec:
            raise DimensionError("all coupled parameter vectors must share one spec")


def l1_coupling(params: Sequence[ParamVector], lam: float) -> float:
    """lam * sum_{j<k} ||theta_j - theta_k||_1"""
    _check_same_spec(params)
    coupling = CouplingSpec(lam, len(params))
    total = 0.0
    for j, k in coupling.pairs:
        total += float(np.abs(params[j].values - params[k].values).sum())
    return coupling.lam * total


def pairwise_l1(stack: np.ndarray) -> float:
    """不带 lam 的耦合值, stack 为 [K×M]"""
    stack = np.asarray(stack, dtype=np.float64)
    return float(sum(np.abs(stack[j] - stack[k]).sum() for j, k in combinations(range(stack.shape[0]), 2)))


def l1_coupling_var(leaves: Sequence[Var], lam: float) -> Optional[Var]:
    """tape 上的耦合项; lam = 0 或只有一个成员时不记录任何节点"""
    coupling = CouplingSpec(lam, len(leaves))
    if coupling.lam == 0 or coupling.K < 2:
        return None
    total = None
    for j, k in coupling.pairs:
        term = ops.l1_distance(leaves[j], leaves[k])
        total = term if total is None else ops.add(total, term)
    return ops.mul(total, coupling.lam)


def _sum(values: Sequence[Var]) -> Var:
    total = values[0]
    for v in values[1:]:
        total = ops.add(total, v)
    return total


# ==================== 计算图 ====================


@dataclass
class ObjectiveGraph:
    """
    一步优化所需的计算图

    g_leaves / d_leaves 是可训练叶子 (按槽位顺序), generator_loss 被最小化,
    critic_loss = -(sum V - lam * C_D) 也被最小化。
    """

    tape: Tape
    g_leaves: list[Var]
    d_leaves: list[Var]
    values: list[Var]
    generator_loss: Var
    critic_loss: Var
    coupling_g: Optional[Var] = None
    coupling_d: Optional[Var] = None

    def member_values(self) -> list[float]:
        return [v.item() for v in self.values]

    def generator_gradients(self) -> list[np.ndarray]:
        grads = self.tape.backward(self.generator_loss)
        return [grads[leaf].copy() for leaf in self.g_leaves]

    def critic_gradients(self) -> list[np.ndarray]:
        grads = self.tape.backward(self.critic_loss)
        return [grads[leaf].copy() for leaf in self.d_leaves]


def _check_batches(batches: Sequence[Batch], K: int, g_spec: MlpSpec) -> list[Batch]:
    if len(batches) != K:
        raise ContractError(f"expected {K} class batches, got {len(batches)}")
    checked = []
    for k, batch in enumerate(batches):
        if batch is None:
            raise ContractError(f"missing batch for class {k}")
        checked.append(check_batch(Batch(*batch), g_spec))
    return checked


def _losses(values: list[Var], coupling_g: Optional[Var], coupling_d: Optional[Var]) -> tuple[Var, Var]:
    total = _sum(values)
    generator_loss = total if coupling_g is None else ops.add(total, coupling_g)
    critic_objective = total if coupling_d is None else ops.sub(total, coupling_d)
    return generator_loss, ops.neg(critic_objective)


def member_graph(kind: ValueKind, theta_g: ParamVector, theta_d: ParamVector, batch: Batch) -> ObjectiveGraph:
    """单个 (G, D) 的图: 单个 GAN 以及独立集成的每个成员"""
    return hybrid_graph(kind, [theta_g], [theta_d], [batch], 0.0)


def hybrid_graph(
    kind: ValueKind,
    thetas_g: Sequence[ParamVector],
    thetas_d: Sequence[ParamVector],
    batches: Sequence[Batch],
    lam: float,
) -> ObjectiveGraph:
    """每个成员一对叶子; 耦合项在同一 tape 上对全部成员求值"""
    if len(thetas_g) != len(thetas_d):
        raise ContractError(f"{len(thetas_g)} generators but {len(thetas_d)} critics")
    K = len(thetas_g)
    g_spec, d_spec = thetas_g[0].spec, thetas_d[0].spec
    check_head(d_spec, kind)
    _check_same_spec(thetas_g)
    _check_same_spec(thetas_d)
    batches = _check_batches(batches, K, g_spec)

    tape = Tape()
    g_leaves = [tape.parameter(t.values, f"theta_G{k}") for k, t in enumerate(thetas_g)]
    d_leaves = [tape.parameter(t.values, f"theta_D{k}") for k, t in enumerate(thetas_d)]
    values = []
    for k in range(K):
        G = Network.bind(g_leaves[k], g_spec)
        D = Network.bind(d_leaves[k], d_spec)
        values.append(value_var(kind, G, D, batches[k]))
    coupling_g = l1_coupling_var(g_leaves, lam)
    coupling_d = l1_coupling_var(d_leaves, lam)
    generator_loss, critic_loss = _losses(values, coupling_g, coupling_d)
    return ObjectiveGraph(tape, g_leaves, d_leaves, values, generator_loss, critic_loss, coupling_g, coupling_d)


def tied_graph(
    kind: ValueKind,
    theta_g: ParamVector,
    theta_d: ParamVector,
    batches: Sequence[Batch],
) -> ObjectiveGraph:
    """所有类别共用一对叶子, 损失为各类别价值之和"""
    check_head(theta_d.spec, kind)
    batches = _check_batches(batches, len(batches), theta_g.spec)
    tape = Tape()
    g_leaf = tape.parameter(theta_g.values, "theta_G")
    d_leaf = tape.parameter(theta_d.values, "theta_D")
    G = Network.bind(g_leaf, theta_g.spec)
    D = Network.bind(d_leaf, theta_d.spec)
    values = [value_var(kind, G, D, batch) for batch in batches]
    generator_loss, critic_loss = _losses(values, None, None)
    return ObjectiveGraph(tape, [g_leaf], [d_leaf], values, generator_loss, critic_loss)


def cgan_graph(
    kind: ValueKind,
    theta_g: ParamVector,
    theta_d: ParamVector,
    bias_g: np.ndarray,
    bias_d: np.ndarray,
    batches: Sequence[Batch],
) -> ObjectiveGraph:
    """
    共享参数 + 偏置矩阵: 类别 k 的第一层偏置取 B[:, k]

    叶子顺序: g_leaves = [theta_G, B_G], d_leaves = [theta_D, B_D]
    """
    check_head(theta_d.spec, kind)
    K = bias_g.shape[1]
    if bias_d.shape[1] != K:
        raise DimensionError(f"B_G has {K} columns but B_D has {bias_d.shape[1]}")
    batches = _check_batches(batches, K, theta_g.spec)
    tape = Tape()
    g_leaf = tape.parameter(theta_g.values, "theta_G")
    d_leaf = tape.parameter(theta_d.values, "theta_D")
    bg_leaf = tape.parameter(bias_g, "B_G")
    bd_leaf = tape.parameter(bias_d, "B_D")
    values = []
    for k in range(K):
        G = Network.bind(g_leaf, theta_g.spec, first_bias=ops.column(bg_leaf, k))
        D = Network.bind(d_leaf, theta_d.spec, first_bias=ops.column(bd_leaf, k))
        values.append(value_var(kind, G, D, batches[k]))
    generator_loss, critic_loss = _losses(values, None, None)
    return ObjectiveGraph(tape, [g_leaf, bg_leaf], [d_leaf, bd_leaf], values, generator_loss, critic_loss)


class _LatentThenTail:
    """x = tail(z @ W_k^T + b_k)"""

    def __init__(self, w: Var, b: Var, tail: Network):
        self.w = w
        self.b = b
        self.tail = tail
        self.spec = tail.spec

    @property
    def tape(self) -> Tape:
        return self.tail.tape

    def __call__(self, z: Var) -> Var:
        return self.tail(ops.add_bias(ops.matmul(z, ops.transpose(self.w)), self.b))


def gmgan_graph(
    kind: ValueKind,
    tail_g: ParamVector,
    theta_d: ParamVector,
    latent_w: np.ndarray,
    latent_b: np.ndarray,
    batches: Sequence[Batch],
) -> ObjectiveGraph:
    """
    共享生成器尾部与判别器, 每个类别一层隐变量线性层

    叶子顺序: g_leaves = [tail, W_0, b_0, W_1, b_1, ...], d_leaves = [theta_D]
    """
    check_head(theta_d.spec, kind)
    K, latent = latent_b.shape
    if latent_w.shape != (K, latent, latent):
        raise DimensionError(f"latent weights must be ({K}, {latent}, {latent}), got {latent_w.shape}")
    batches = _check_batches(batches, K, tail_g.spec)
    tape = Tape()
    tail_leaf = tape.parameter(tail_g.values, "tail_G")
    d_leaf = tape.parameter(theta_d.values, "theta_D")
    tail = Network.bind(tail_leaf, tail_g.spec)
    D = Network.bind(d_leaf, theta_d.spec)
    g_leaves = [tail_leaf]
    values = []
    for k in range(K):
        w = tape.parameter(latent_w[k], f"W_{k}")
        b = tape.parameter(latent_b[k], f"b_{k}")
        g_leaves += [w, b]
        values.append(value_var(kind, _LatentThenTail(w, b, tail), D, batches[k]))
    generator_loss, critic_loss = _losses(values, None, None)
    return ObjectiveGraph(tape, g_leaves, [d_leaf], values, generator_loss, critic_loss)


def model_graph(kind: ValueKind, model: EnsembleModel, batches: Sequence[Batch]) -> ObjectiveGraph:
    """按模型的共享方式选择计算图"""
    mode = model.mode
    if mode in (SharingMode.INDEPENDENT, SharingMode.L1):
        lam = model.lam if mode is SharingMode.L1 else 0.0
        return hybrid_graph(kind, model.generators, model.critics, batches, lam)
    if mode is SharingMode.CGAN:
        return cgan_graph(kind, model.generators[0], model.critics[0], model.bias_g, model.bias_d, batches)
    if mode is SharingMode.GMGAN:
        return gmgan_graph(kind, model.generators[0], model.critics[0], model.latent_w, model.latent_b, batches)
    return tied_graph(kind, model.generators[0], model.critics[0], batches)


# ==================== 数值接口 ====================


def ensemble_value(model: EnsembleModel, batches: Sequence[Batch], kind: ValueKind = ValueKind.WASSERSTEIN) -> list[float]:
    """每个成员在自己类别批次上的 V, 无交叉项"""
    return model_graph(kind, model, batches).member_values()


def hybrid_objective(
    model: EnsembleModel,
    batches: Sequence[Batch],
    lam: Optional[float] = None,
    kind: ValueKind = ValueKind.WASSERSTEIN,
) -> tuple[float, float]:
    """
    返回 (生成器目标 sum V + lam C_G, 判别器目标 sum V - lam C_D)

    lam 缺省时取 model.lam
    """
    if model.mode not in (SharingMode.L1, SharingMode.INDEPENDENT):
        raise ContractError(f"hybrid objective needs per-member parameters, model mode is {model.mode.value}")
    lam = model.lam if lam is None else lam
    graph = hybrid_graph(kind, model.generators, model.critics, batches, lam)
    return graph.generator_loss.item(), -graph.critic_loss.item()


def pooled_value(
    theta_g: ParamVector,
    theta_d: ParamVector,
    batches: Sequence[Batch],
    kind: ValueKind = ValueKind.WASSERSTEIN,
) -> float:
    """tied 模式的合并价值 sum_k V(theta_G, theta_D; batch_k)"""
    return tied_graph(kind, theta_g, theta_d, batches).generator_loss.item()
