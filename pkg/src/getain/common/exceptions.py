"""异常定义"""

from typing import Any, Optional


class GetainError(Exception):
    """所有库异常的基类"""


class DimensionError(GetainError):
    """张量/网络形状不匹配"""


class ContractError(GetainError):
    """违反前置条件"""


class DomainError(GetainError):
    """数值定义域错误 (log 非正数, 非有限值)"""


class ConfigError(GetainError):
    """配置文件错误"""


class OutputExistsError(GetainError):
    """输出已存在且未指定 --force-overwrite"""


class ScheduleMismatchError(GetainError):
    """比较的运行评估计划不一致"""


class CertificationError(GetainError):
    """数据分量重叠或相切, 无法证明分离距离 d > 0"""

    def __init__(self, pair: tuple[int, int], distance: float):
        self.pair = pair
        self.distance = distance
        super().__init__(f"components {pair[0]} and {pair[1]} are not separated (distance {distance:.6g})")


class DivergenceError(GetainError):
    """损失非有限或过大, 训练中止"""

    def __init__(self, epoch: int, loss: float, last_good: Optional[Any] = None):
        self.epoch = epoch
        self.loss = loss
        self.last_good = last_good
        super().__init__(f"training diverged at epoch {epoch} (loss {loss!r})")


class PartialSampleError(GetainError):
    """截断采样在 max_draws 内未收集到足够样本"""

    def __init__(self, found: Any, draws: int, n_target: int):
        self.found = found
        self.draws = draws
        self.n_target = n_target
        super().__init__(f"only {len(found.points)} of {n_target} samples accepted after {draws} draws")
