"""训练循环与优化器"""

from .config import TrainConfig, default_critic_spec, default_generator_spec
from .history import HISTORY_COLUMNS, History, read_history
from .optim import SGD, Optimizer, RMSprop, make_optimizer
from .prox import isotonic_columns, prox_pairwise_l1
from .trainers import (
    ClassSampler,
    PooledSampler,
    TrainResult,
    batch_weights,
    model_gradients,
    run_engine,
    stratified_sizes,
    train,
    train_cgan,
    train_ensemble,
    train_gmgan,
    train_hybrid,
    train_single,
    train_tied,
)

__all__ = [
    "TrainConfig",
    "default_generator_spec",
    "default_critic_spec",
    "History",
    "HISTORY_COLUMNS",
    "read_history",
    "Optimizer",
    "SGD",
    "RMSprop",
    "make_optimizer",
    "prox_pairwise_l1",
    "isotonic_columns",
    "ClassSampler",
    "PooledSampler",
    "stratified_sizes",
    "batch_weights",
    "TrainResult",
    "run_engine",
    "model_gradients",
    "train",
    "train_single",
    "train_ensemble",
    "train_hybrid",
    "train_tied",
    "train_cgan",
    "train_gmgan",
]
