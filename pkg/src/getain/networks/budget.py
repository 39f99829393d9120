"""
参数预算

- 等价集成的宽度规则: 成员隐藏层宽度取满足 K * count(member) < count(single) 的最大整数
- DCGAN 参数计数 (仅算术, 不构建可训练网络), 用于核对图像规模实验的参数量:

    >>> dcgan_param_count("generator", 64)
    3576704
    >>> dcgan_param_count("generator", 15)
    312004
    >>> 10 * dcgan_param_count("generator", 15)
    3120040
    >>> dcgan_param_count("critic", 64), dcgan_param_count("critic", 20)
    (2765568, 272880)

常被引用的单生成器参数量 3,476,704 与按结构统计的 3,576,704 不符, 以后者为准。
"""

from ..common.exceptions import ContractError
from .mlp import MlpSpec, param_count


def equivalent_width(single: MlpSpec, K: int) -> int:
    """K 个成员总参数严格少于单个网络时的最大隐藏层宽度"""
    if K < 1:
        raise ContractError(f"K must be positive, got {K}")
    if len(single.layer_sizes) < 3:
        raise ContractError("equivalent width needs at least one hidden layer")
    budget = param_count(single)
    width = 0
    h = 1
    while K * param_count(single.with_widths(h)) < budget:
        width = h
        h += 1
    if width == 0:
        raise ContractError(f"no hidden width fits {K} members under {budget} parameters")
    return width


def equivalent_spec(single: MlpSpec, K: int) -> MlpSpec:
    return single.with_widths(equivalent_width(single, K))


def dcgan_param_count(
    kind: str,
    width: int,
    latent: int = 100,
    channels: int = 3,
    image_size: int = 64,
) -> int:
    """
    按 WGAN 参考实现的 DCGAN 结构统计参数

    卷积/转置卷积均为 4x4 且无偏置; 内部层带 BatchNorm (weight + bias)。

    Args:
        kind: "generator" 或 "critic"
        width: ngf / ndf
    """
    if image_size % 16 != 0:
        raise ContractError(f"image size must be a multiple of 16, got {image_size}")
    kernel = 16
    total = 0
    if kind == "generator":
        cngf, tisize = width // 2, 4
        while tisize != image_size:
            cngf *= 2
            tisize *= 2
        total += latent * cngf * kernel + 2 * cngf
        csize = 4
        while csize < image_size // 2:
            total += cngf * (cngf // 2) * kernel + 2 * (cngf // 2)
            cngf //= 2
            csize *= 2
        total += cngf * channels * kernel
    elif kind == "critic":
        total += channels * width * kernel
        csize, cndf = image_size // 2, width
        while csize > 4:
            total += cndf * (cndf * 2) * kernel + 2 * (cndf * 2)
            cndf *= 2
            csize //= 2
        total += cndf * 1 * kernel
    else:
        raise ContractError(f"unknown kind {kind!r}")
    return total
