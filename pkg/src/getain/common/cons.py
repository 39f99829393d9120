"""枚举与常量定义"""

from enum import Enum


class Activation(Enum):
    """隐藏层激活函数"""

    TANH = "tanh"
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    SIGMOID = "sigmoid"


class OutputActivation(Enum):
    """输出层激活"""

    NONE = "none"  # WGAN 判别器 / 生成器
    SIGMOID = "sigmoid"  # 交叉熵 GAN 判别器
    TANH = "tanh"


class SharingMode(Enum):
    """集成成员之间的参数共享方式"""

    INDEPENDENT = "independent"  # 完全独立
    L1 = "l1"  # l1 耦合
    TIED = "tied"  # 权重绑定 (t = 0)
    CGAN = "cgan"  # 仅第一层偏置不同
    GMGAN = "gmgan"  # 仅生成器第一层不同
    SINGLE = "single"  # 单个 GAN


class ValueKind(Enum):
    """价值函数"""

    VANILLA = "vanilla"
    WASSERSTEIN = "wasserstein"


class OptimizerKind(Enum):
    """优化器"""

    SGD = "sgd"
    RMSPROP = "rmsprop"


class CouplingUpdate(Enum):
    """l1 耦合项的更新方式"""

    SUBGRADIENT = "subgradient"  # 次梯度进入损失
    PROXIMAL = "proximal"  # 优化器步之后做近端映射


class ComponentKind(Enum):
    """数据分量的几何形状"""

    DISK = "disk"
    ANNULUS_ARC = "annulus_arc"
    BOX = "box"


# 每种模式下训练所对应的成员数量语义
SHARED_MODES = {SharingMode.TIED, SharingMode.CGAN, SharingMode.GMGAN}
PER_MEMBER_MODES = {SharingMode.INDEPENDENT, SharingMode.L1}

# 随机数流编号: (seed, member, stream)
STREAM_INIT = 0
STREAM_TRAIN = 1
STREAM_EVAL = 2
