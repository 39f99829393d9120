"""
训练循环

一个 epoch = n_critic 次判别器更新 (wasserstein 下每次之后截断参数) + 1 次生成器更新。
每个类别 k 的批次来自独立随机数流 (seed, k, STREAM_TRAIN), 初始化来自 (seed, k, STREAM_INIT),
因此各模式之间、顺序与多线程之间的结果都可以逐位复现。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..autodiff.ops import clamp_params
from ..common.cons import CouplingUpdate, SharingMode, ValueKind
from ..common.exceptions import ContractError, DivergenceError
from ..common.settings import DIVERGENCE_LIMIT
from ..datasets.dataset import DisconnectedDataset, mle_mixture_weights
from ..networks.ensemble import EnsembleModel, single_model, tied_model
from ..networks.mlp import MlpSpec, ParamVector, init_params
from ..objectives.hybrid import (
    ObjectiveGraph,
    cgan_graph,
    gmgan_graph,
    hybrid_graph,
    model_graph,
    pairwise_l1,
    tied_graph,
)
from ..objectives.values import Batch
from ..utils.logger import get_logger
from ..utils.rng import init_rng, member_rng
from .config import TrainConfig
from .history import History
from .optim import Optimizer, make_optimizer
from .prox import prox_pairwise_l1

log = get_logger()

EvalCallback = Callable[[int, EnsembleModel], None]


@dataclass
class TrainResult:
    model: EnsembleModel
    history: History

    @property
    def frame(self) -> pd.DataFrame:
        return self.history.to_frame()


class ClassSampler:
    """从一个类别的样本中有放回抽取真实批次, 并抽取 N(0, I) 隐变量"""

    def __init__(self, points: np.ndarray, latent: int, batch_size: int, rng: np.random.Generator):
        if points.shape[0] == 0:
            raise ContractError("cannot sample batches from an empty class")
        self.points = points
        self.latent = latent
        self.batch_size = batch_size
        self.rng = rng

    def draw(self) -> Batch:
        idx = self.rng.integers(0, self.points.shape[0], size=self.batch_size)
        z = self.rng.standard_normal((self.batch_size, self.latent))
        return Batch(self.points[idx], z)


class PooledSampler:
    """各类别子批次拼成一个批次; 子批次与 tied 训练的逐类批次逐位相同"""

    def __init__(self, samplers: Sequence[ClassSampler]):
        if not samplers:
            raise ContractError("pooled sampler needs at least one class")
        self.samplers = list(samplers)

    def draw(self) -> Batch:
        parts = [s.draw() for s in self.samplers]
        return Batch(np.concatenate([p.real for p in parts]), np.concatenate([p.z for p in parts]))


def stratified_sizes(batch_size: int, weights: Sequence[float]) -> np.ndarray:
    """
    按权重把 batch_size 分给各类别

    最大余数法取整, 余数相同时序号小者优先; 权重为正的类别至少分到 1 个。
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or not w.sum() > 0:
        raise ContractError(f"stratification weights must be non-negative with a positive sum, got {w}")
    positive = w > 0
    if batch_size < int(positive.sum()):
        raise ContractError(f"batch size {batch_size} is smaller than the {int(positive.sum())} weighted classes")
    raw = batch_size * w / w.sum()
    sizes = np.floor(raw).astype(np.int64)
    order = np.argsort(-(raw - sizes), kind="stable")
    sizes[order[: batch_size - int(sizes.sum())]] += 1
    for k in np.flatnonzero(positive & (sizes == 0)):
        sizes[np.argmax(sizes)] -= 1
        sizes[k] += 1
    return sizes


class Slot:
    """一个可训练数组及其优化器状态"""

    def __init__(self, name: str, value: np.ndarray, optimizer: Optimizer):
        self.name = name
        self.value = np.array(value, dtype=np.float64)
        self.optimizer = optimizer


# ==================== 通用循环 ====================


class Engine:
    """
    一种共享方式的训练状态

    子类给出: 槽位 (g_slots / d_slots)、计算图构造 build()、当前模型 model()
    """

    members: list[int]

    def __init__(self, cfg: TrainConfig, samplers: Sequence[ClassSampler | PooledSampler]):
        self.cfg = cfg
        self.samplers = list(samplers)
        self.g_slots: list[Slot] = []
        self.d_slots: list[Slot] = []

    def slot(self, name: str, value: np.ndarray) -> Slot:
        return Slot(name, value, make_optimizer(self.cfg))

    def draw(self) -> list[Batch]:
        return [s.draw() for s in self.samplers]

    def build(self, batches: list[Batch]) -> ObjectiveGraph:
        raise NotImplementedError

    def model(self, epoch: int) -> EnsembleModel:
        raise NotImplementedError

    def coupling_value(self) -> float:
        return 0.0

    def after_critic(self) -> None:
        if self.cfg.value_kind is ValueKind.WASSERSTEIN:
            for slot in self.d_slots:
                slot.value = clamp_params(slot.value, self.cfg.clip_c)

    def after_generator(self) -> None:
        pass


def _guard(loss: float, epoch: int, last_good: Optional[EnsembleModel]) -> None:
    if not np.isfinite(loss) or abs(loss) > DIVERGENCE_LIMIT:
        log.error(f"divergence at epoch {epoch}: loss = {loss!r}")
        raise DivergenceError(epoch, loss, last_good)


def _apply(slots: list[Slot], grads: list[np.ndarray], epoch: int, last_good) -> None:
    for slot, grad in zip(slots, grads):
        new = slot.optimizer.step(slot.value, grad)
        if not np.all(np.isfinite(new)):
            log.error(f"divergence at epoch {epoch}: non-finite update of {slot.name}")
            raise DivergenceError(epoch, float("nan"), last_good)
        slot.value = new


def run_engine(engine: Engine, label: str = "train", on_eval: Optional[EvalCallback] = None) -> TrainResult:
    cfg = engine.cfg
    history = History()
    last_good: Optional[EnsembleModel] = None
    epochs = tqdm(range(1, cfg.epochs + 1), desc=label, disable=not cfg.show_progress, leave=False)
    for epoch in epochs:
        for _ in range(cfg.n_critic):
            graph = engine.build(engine.draw())
            _guard(graph.critic_loss.item(), epoch, last_good)
            _apply(engine.d_slots, graph.critic_gradients(), epoch, last_good)
            engine.after_critic()

        graph = engine.build(engine.draw())
        _guard(graph.generator_loss.item(), epoch, last_good)
        values = graph.member_values()
        _apply(engine.g_slots, graph.generator_gradients(), epoch, last_good)
        engine.after_generator()

        if epoch % cfg.eval_interval == 0 or epoch == cfg.epochs:
            coupling = engine.coupling_value()
            for member, v in zip(engine.members, values):
                history.record(epoch, member, v, coupling)
            last_good = engine.model(epoch)
            log.debug(f"{label} epoch {epoch}: values = {values}, coupling = {coupling:.6g}")
            if on_eval is not None:
                on_eval(epoch, last_good)
    return TrainResult(engine.model(cfg.epochs), history)


# ==================== 各模式 ====================


def _init_pair(cfg: TrainConfig, member: int) -> tuple[ParamVector, ParamVector]:
    rng = init_rng(cfg.seed, member)
    theta_g = init_params(cfg.g_spec, rng)
    theta_d = init_params(cfg.d_spec, rng)
    if cfg.value_kind is ValueKind.WASSERSTEIN:
        theta_d = clamp_params(theta_d, cfg.clip_c)
    return theta_g, theta_d


def _samplers(cfg: TrainConfig, subsets: Sequence[np.ndarray], members: Sequence[int]) -> list[ClassSampler]:
    return [
        ClassSampler(points, cfg.latent_size, cfg.batch_size, member_rng(cfg.seed, k))
        for points, k in zip(subsets, members)
    ]


def _stratified_samplers(
    cfg: TrainConfig, subsets: Sequence[np.ndarray], weights: Sequence[float]
) -> list[ClassSampler]:
    """类别 k 抽 sizes[k] 个点, 随机数流同独立成员 k; 分到 0 个的类别不参与"""
    sizes = stratified_sizes(cfg.batch_size, weights)
    return [
        ClassSampler(points, cfg.latent_size, int(size), member_rng(cfg.seed, k))
        for k, (points, size) in enumerate(zip(subsets, sizes))
        if size > 0
    ]


def _meta(cfg: TrainConfig, epoch: int) -> dict:
    return {"epoch": epoch, "value_kind": cfg.value_kind.value}


class MemberEngine(Engine):
    """
    K 对独立参数; K = 1 即单个 GAN (单 GAN 传入一个 PooledSampler)

    l1 模式下耦合项以次梯度进入损失 (subgradient), 或在每次优化器更新后做近端映射 (proximal)。
    """

    def __init__(
        self,
        cfg: TrainConfig,
        subsets: Sequence[np.ndarray],
        members: Sequence[int],
        pi: np.ndarray,
        mode: SharingMode,
        samplers: Optional[Sequence[ClassSampler | PooledSampler]] = None,
    ):
        super().__init__(cfg, _samplers(cfg, subsets, members) if samplers is None else samplers)
        self.members = list(members)
        self.pi = pi
        self.mode = mode
        for k in self.members:
            theta_g, theta_d = _init_pair(cfg, k)
            self.g_slots.append(self.slot(f"theta_G{k}", theta_g.values))
            self.d_slots.append(self.slot(f"theta_D{k}", theta_d.values))
        self.coupled = mode is SharingMode.L1 and cfg.lam > 0
        self.proximal = self.coupled and cfg.coupling_update is CouplingUpdate.PROXIMAL

    def build(self, batches: list[Batch]) -> ObjectiveGraph:
        lam = self.cfg.lam if self.coupled and not self.proximal else 0.0
        return hybrid_graph(
            self.cfg.value_kind,
            [ParamVector(s.value, self.cfg.g_spec) for s in self.g_slots],
            [ParamVector(s.value, self.cfg.d_spec) for s in self.d_slots],
            batches,
            lam,
        )

    def _prox(self, slots: list[Slot]) -> None:
        """步长取各成员优化器逐坐标步长的均值 (sgd 下即学习率)"""
        scale = np.mean([np.broadcast_to(s.optimizer.step_scale(), s.value.shape) for s in slots], axis=0)
        stack = prox_pairwise_l1(np.stack([s.value for s in slots]), scale * self.cfg.lam)
        for slot, row in zip(slots, stack):
            slot.value = row

    def after_critic(self) -> None:
        if self.proximal:
            self._prox(self.d_slots)
        super().after_critic()

    def after_generator(self) -> None:
        if self.proximal:
            self._prox(self.g_slots)

    def coupling_value(self) -> float:
        if self.mode is not SharingMode.L1:
            return 0.0
        return pairwise_l1(np.stack([s.value for s in self.g_slots]))

    def parameters(self) -> tuple[list[ParamVector], list[ParamVector]]:
        gens = [ParamVector(s.value.copy(), self.cfg.g_spec) for s in self.g_slots]
        crits = [ParamVector(s.value.copy(), self.cfg.d_spec) for s in self.d_slots]
        return gens, crits

    def model(self, epoch: int) -> EnsembleModel:
        gens, crits = self.parameters()
        if self.mode is SharingMode.SINGLE:
            return single_model(gens[0], crits[0], seed=self.cfg.seed, meta=_meta(self.cfg, epoch))
        return EnsembleModel(
            self.cfg.g_spec,
            self.cfg.d_spec,
            self.mode,
            self.pi,
            gens,
            crits,
            lam=self.cfg.lam,
            seed=self.cfg.seed,
            meta=_meta(self.cfg, epoch),
        )


class TiedEngine(Engine):
    """
    一对共享参数, 损失为各类别价值之和

    类别 k 的批次大小按 weights 分层, 与单 GAN 的合并批次使用同一组子批次。
    """

    def __init__(self, cfg: TrainConfig, subsets: Sequence[np.ndarray], pi: np.ndarray, weights: Sequence[float]):
        K = len(subsets)
        if K != len(weights):
            raise ContractError(f"{K} classes but {len(weights)} stratification weights")
        if np.any(np.asarray(weights) <= 0):
            raise ContractError(f"tied training needs a positive weight for every class, got {weights}")
        super().__init__(cfg, _stratified_samplers(cfg, subsets, weights))
        self.members = list(range(K))
        self.pi = pi
        theta_g, theta_d = _init_pair(cfg, 0)
        self.g_slots = [self.slot("theta_G", theta_g.values)]
        self.d_slots = [self.slot("theta_D", theta_d.values)]

    def build(self, batches: list[Batch]) -> ObjectiveGraph:
        return tied_graph(
            self.cfg.value_kind,
            ParamVector(self.g_slots[0].value, self.cfg.g_spec),
            ParamVector(self.d_slots[0].value, self.cfg.d_spec),
            batches,
        )

    def model(self, epoch: int) -> EnsembleModel:
        theta_g = ParamVector(self.g_slots[0].value.copy(), self.cfg.g_spec)
        theta_d = ParamVector(self.d_slots[0].value.copy(), self.cfg.d_spec)
        return tied_model(theta_g, theta_d, self.pi, seed=self.cfg.seed, meta=_meta(self.cfg, epoch))


class CganEngine(Engine):
    """共享参数 + 偏置矩阵 B_G / B_D; 共享向量中的第一层偏置位置不参与计算, 置 0"""

    def __init__(self, cfg: TrainConfig, subsets: Sequence[np.ndarray], pi: np.ndarray):
        K = len(subsets)
        super().__init__(cfg, _samplers(cfg, subsets, range(K)))
        self.members = list(range(K))
        self.pi = pi
        rng = init_rng(cfg.seed, 0)
        theta_g = init_params(cfg.g_spec, rng)
        theta_d = init_params(cfg.d_spec, rng)
        bias_g = self._bias_matrix(cfg.g_spec, K, rng)
        bias_d = self._bias_matrix(cfg.d_spec, K, rng)
        g = theta_g.values.copy()
        g[cfg.g_spec.first_bias_slice()] = 0.0
        d = theta_d.values.copy()
        d[cfg.d_spec.first_bias_slice()] = 0.0
        if cfg.value_kind is ValueKind.WASSERSTEIN:
            d = clamp_params(d, cfg.clip_c)
            bias_d = clamp_params(bias_d, cfg.clip_c)
        self.g_slots = [self.slot("theta_G", g), self.slot("B_G", bias_g)]
        self.d_slots = [self.slot("theta_D", d), self.slot("B_D", bias_d)]

    @staticmethod
    def _bias_matrix(spec: MlpSpec, K: int, rng: np.random.Generator) -> np.ndarray:
        bound = 1.0 / np.sqrt(spec.input_size)
        return rng.uniform(-bound, bound, size=(spec.layer_sizes[1], K))

    def build(self, batches: list[Batch]) -> ObjectiveGraph:
        return cgan_graph(
            self.cfg.value_kind,
            ParamVector(self.g_slots[0].value, self.cfg.g_spec),
            ParamVector(self.d_slots[0].value, self.cfg.d_spec),
            self.g_slots[1].value,
            self.d_slots[1].value,
            batches,
        )

    def model(self, epoch: int) -> EnsembleModel:
        return EnsembleModel(
            self.cfg.g_spec,
            self.cfg.d_spec,
            SharingMode.CGAN,
            self.pi,
            [ParamVector(self.g_slots[0].value.copy(), self.cfg.g_spec)],
            [ParamVector(self.d_slots[0].value.copy(), self.cfg.d_spec)],
            bias_g=self.g_slots[1].value.copy(),
            bias_d=self.d_slots[1].value.copy(),
            seed=self.cfg.seed,
            meta=_meta(self.cfg, epoch),
        )


class GmganEngine(Engine):
    """共享生成器尾部与判别器; 每个类别一层隐变量线性层, 初始为 (I, 0)"""

    def __init__(self, cfg: TrainConfig, subsets: Sequence[np.ndarray], pi: np.ndarray):
        K = len(subsets)
        super().__init__(cfg, _samplers(cfg, subsets, range(K)))
        self.members = list(range(K))
        self.pi = pi
        theta_g, theta_d = _init_pair(cfg, 0)
        latent = cfg.latent_size
        self.g_slots = [self.slot("tail_G", theta_g.values)]
        for k in range(K):
            self.g_slots.append(self.slot(f"W_{k}", np.eye(latent)))
            self.g_slots.append(self.slot(f"b_{k}", np.zeros(latent)))
        self.d_slots = [self.slot("theta_D", theta_d.values)]

    def latent_layers(self) -> tuple[np.ndarray, np.ndarray]:
        latent_w = np.stack([s.value for s in self.g_slots[1::2]])
        latent_b = np.stack([s.value for s in self.g_slots[2::2]])
        return latent_w, latent_b

    def build(self, batches: list[Batch]) -> ObjectiveGraph:
        latent_w, latent_b = self.latent_layers()
        return gmgan_graph(
            self.cfg.value_kind,
            ParamVector(self.g_slots[0].value, self.cfg.g_spec),
            ParamVector(self.d_slots[0].value, self.cfg.d_spec),
            latent_w,
            latent_b,
            batches,
        )

    def model(self, epoch: int) -> EnsembleModel:
        latent_w, latent_b = self.latent_layers()
        return EnsembleModel(
            self.cfg.g_spec,
            self.cfg.d_spec,
            SharingMode.GMGAN,
            self.pi,
            [ParamVector(self.g_slots[0].value.copy(), self.cfg.g_spec)],
            [ParamVector(self.d_slots[0].value.copy(), self.cfg.d_spec)],
            latent_w=latent_w.copy(),
            latent_b=latent_b.copy(),
            seed=self.cfg.seed,
            meta=_meta(self.cfg, epoch),
        )


# ==================== 入口 ====================


def _require(cfg: TrainConfig, *modes: SharingMode) -> None:
    if cfg.mode not in modes:
        raise ContractError(f"trainer expects mode {'/'.join(m.value for m in modes)}, got {cfg.mode.value}")


def _weights(dataset: DisconnectedDataset) -> np.ndarray:
    return mle_mixture_weights(dataset.labels, dataset.K)


def batch_weights(dataset: DisconnectedDataset) -> np.ndarray:
    """分层批次的类别权重: 生成时的 pi; 有正权重的类别没有样本时退回样本比例"""
    counts = np.bincount(dataset.labels, minlength=dataset.K)
    pi = np.asarray(dataset.pi_true, dtype=np.float64)
    if pi.size != dataset.K or np.any((pi > 0) & (counts == 0)):
        return counts / counts.sum()
    return pi


def single_engine(cfg: TrainConfig, dataset: DisconnectedDataset) -> MemberEngine:
    subsets = [dataset.class_points(k) for k in range(dataset.K)]
    sampler = PooledSampler(_stratified_samplers(cfg, subsets, batch_weights(dataset)))
    return MemberEngine(cfg, [dataset.points], [0], np.ones(1), SharingMode.SINGLE, [sampler])


def tied_engine(cfg: TrainConfig, dataset: DisconnectedDataset) -> TiedEngine:
    return TiedEngine(cfg, dataset.class_subsets(), _weights(dataset), batch_weights(dataset))


def train_single(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    """
    在全部样本上训练一个 (G, D)

    每步的真实批次按类别分层: 类别 k 贡献约 batch_size * pi_k 个点, 批次组成不受样本中类别比例的随机波动影响。
    """
    if cfg.mode is SharingMode.TIED and dataset.K > 1:
        raise ContractError("tied mode with K > 1 must be trained with train_tied")
    _require(cfg, SharingMode.SINGLE, SharingMode.TIED)
    log.info(f"training single GAN ({cfg.value_kind.value}, {cfg.epochs} epochs, seed {cfg.seed})")
    result = run_engine(single_engine(cfg, dataset), "single", on_eval)
    log.info("single GAN training finished")
    return result


def train_ensemble(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    """
    独立集成: 成员 k 只在类别 k 上按 train_single 的方式训练

    workers > 1 时成员在线程池中并行, 结果与顺序训练一致; 评估回调在全部成员结束后按 epoch 依次调用。
    """
    _require(cfg, SharingMode.INDEPENDENT)
    subsets = dataset.class_subsets()
    K = dataset.K
    pi = _weights(dataset)
    log.info(f"training independent ensemble of {K} members ({cfg.workers} workers)")

    snapshots: list[dict[int, EnsembleModel]] = [{} for _ in range(K)]

    def run_member(k: int) -> TrainResult:
        engine = MemberEngine(cfg, [subsets[k]], [k], np.ones(1), SharingMode.INDEPENDENT)

        def keep(epoch: int, model: EnsembleModel) -> None:
            snapshots[k][epoch] = model

        return run_engine(engine, f"member {k}", keep)

    def assemble(epoch: int) -> EnsembleModel:
        gens = [snapshots[k][epoch].generators[0] for k in range(K)]
        crits = [snapshots[k][epoch].critics[0] for k in range(K)]
        return EnsembleModel(
            cfg.g_spec, cfg.d_spec, SharingMode.INDEPENDENT, pi, gens, crits, seed=cfg.seed, meta=_meta(cfg, epoch)
        )

    try:
        if cfg.workers > 1 and K > 1:
            with ThreadPoolExecutor(max_workers=min(cfg.workers, K)) as pool:
                results = list(pool.map(run_member, range(K)))
        else:
            results = [run_member(k) for k in range(K)]
    except DivergenceError as e:
        common = set.intersection(*(set(s) for s in snapshots)) if all(snapshots) else set()
        raise DivergenceError(e.epoch, e.loss, assemble(max(common)) if common else None) from e

    history = History()
    epochs = sorted(snapshots[0])
    for epoch in epochs:
        model = assemble(epoch)
        coupling = pairwise_l1(np.stack([g.values for g in model.generators]))
        for k in range(K):
            rows = results[k].frame
            loss = rows.loc[rows["epoch"] == epoch, "loss_value"].iloc[0]
            history.record(epoch, k, loss, coupling)
        if on_eval is not None:
            on_eval(epoch, model)

    final = assemble(cfg.epochs)
    log.info("independent ensemble training finished")
    return TrainResult(final, history)


def train_hybrid(
    cfg: TrainConfig,
    dataset: DisconnectedDataset,
    lam: Optional[float] = None,
    on_eval: Optional[EvalCallback] = None,
) -> TrainResult:
    """l1 耦合集成: 所有成员在同一快照上联合更新"""
    if lam is not None:
        cfg = cfg.with_overrides(lam=lam)
    _require(cfg, SharingMode.L1)
    subsets = dataset.class_subsets()
    log.info(f"training l1-coupled ensemble: lambda = {cfg.lam}, update = {cfg.coupling_update.value}")
    engine = MemberEngine(cfg, subsets, list(range(dataset.K)), _weights(dataset), SharingMode.L1)
    result = run_engine(engine, f"l1 {cfg.lam:g}", on_eval)
    log.info(f"l1-coupled training finished, coupling = {engine.coupling_value():.6g}")
    return result


def train_tied(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    _require(cfg, SharingMode.TIED)
    log.info(f"training tied ensemble over {dataset.K} classes")
    return run_engine(tied_engine(cfg, dataset), "tied", on_eval)


def train_cgan(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    _require(cfg, SharingMode.CGAN)
    log.info(f"training cGAN view over {dataset.K} classes")
    engine = CganEngine(cfg, dataset.class_subsets(), _weights(dataset))
    return run_engine(engine, "cgan", on_eval)


def train_gmgan(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    _require(cfg, SharingMode.GMGAN)
    log.info(f"training GM-GAN view over {dataset.K} classes")
    engine = GmganEngine(cfg, dataset.class_subsets(), _weights(dataset))
    return run_engine(engine, "gmgan", on_eval)


TRAINERS = {
    SharingMode.SINGLE: train_single,
    SharingMode.INDEPENDENT: train_ensemble,
    SharingMode.L1: train_hybrid,
    SharingMode.TIED: train_tied,
    SharingMode.CGAN: train_cgan,
    SharingMode.GMGAN: train_gmgan,
}


def train(cfg: TrainConfig, dataset: DisconnectedDataset, on_eval: Optional[EvalCallback] = None) -> TrainResult:
    """按 cfg.mode 选择训练器"""
    trainer = TRAINERS[cfg.mode]
    if trainer is train_hybrid:
        return train_hybrid(cfg, dataset, on_eval=on_eval)
    return trainer(cfg, dataset, on_eval)


def model_gradients(
    model: EnsembleModel,
    batches: Sequence[Batch],
    kind: ValueKind = ValueKind.WASSERSTEIN,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """一步的 (生成器梯度, 判别器梯度), 按模型槽位顺序"""
    graph = model_graph(kind, model, batches)
    return graph.generator_gradients(), graph.critic_gradients()
