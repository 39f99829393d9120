"""
全成对 l1 耦合的近端映射

    prox(Y) = argmin_X  1/2 ||X - Y||^2 + w * sum_{j<k} |x_j - x_k|

逐坐标求解: 解保持 y 的顺序; 按升序排列后耦合项是线性的
(第 i 小的元素系数为 2i - K - 1), 因此解为 u_i = y_(i) - w (2i - K - 1) 的保序回归。
"""

import numpy as np

from ..common.exceptions import ContractError


def isotonic_columns(u: np.ndarray) -> np.ndarray:
    """
    每列做非降保序回归: x_i = max_{a<=i} min_{b>=i} mean(u_a..u_b)

    K 很小 (成员数), 直接用 min-max 公式对所有列向量化。
    """
    K = u.shape[0]
    csum = np.vstack([np.zeros((1,) + u.shape[1:]), np.cumsum(u, axis=0)])
    out = np.empty_like(u)
    for i in range(K):
        best = None
        for a in range(i + 1):
            worst = None
            for b in range(i, K):
                m = (csum[b + 1] - csum[a]) / (b - a + 1)
                worst = m if worst is None else np.minimum(worst, m)
            best = worst if best is None else np.maximum(best, worst)
        out[i] = best
    return out


def prox_pairwise_l1(stack: np.ndarray, weight: float | np.ndarray) -> np.ndarray:
    """
    stack 为 [K×M] (每行一个成员)

    weight 为标量或长度 M 的向量 (每个坐标一个权重), 即步长 * lam
    """
    stack = np.asarray(stack, dtype=np.float64)
    if stack.ndim != 2:
        raise ContractError(f"stack must be [K×M], got shape {stack.shape}")
    weight = np.asarray(weight, dtype=np.float64)
    if weight.ndim > 1 or (weight.ndim == 1 and weight.shape[0] != stack.shape[1]):
        raise ContractError(f"prox weight must be a scalar or have {stack.shape[1]} entries, got shape {weight.shape}")
    if np.any(~np.isfinite(weight)) or np.any(weight < 0):
        raise ContractError(f"prox weight must be finite and >= 0, got {weight}")
    K = stack.shape[0]
    if not np.any(weight) or K < 2:
        return stack.copy()

    order = np.argsort(stack, axis=0, kind="stable")
    y = np.take_along_axis(stack, order, axis=0)
    coef = (2.0 * np.arange(1, K + 1) - K - 1)[:, None]
    x = isotonic_columns(y - weight * coef)
    out = np.empty_like(stack)
    np.put_along_axis(out, order, x, axis=0)
    return out
