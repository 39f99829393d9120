"""应用配置"""

from pathlib import Path

# 项目根目录
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent

# 资源目录
RESOURCE_DIR = PROJECT_ROOT / "resource"

# 参考实验配置目录
CONFIGS_DIR = RESOURCE_DIR / "configs"

# 日志目录
LOG_DIR = PROJECT_ROOT / "logs"

# 日志配置文件
LOG_CONFIG_FILE = PROJECT_ROOT / "logging_config.json"

# 项目配置文件
PYPROJECT_FILE = PROJECT_ROOT / "pyproject.toml"

# 输出文件名
DATASET_CSV = "dataset.csv"
DATASET_META = "dataset.meta"
HISTORY_CSV = "history.csv"
METRICS_CSV = "metrics.csv"
COMPARE_CSV = "compare.csv"
CHECKPOINT_DIR = "checkpoints"
FINAL_CHECKPOINT = "final.ckpt"

# 数值常量
SIGMOID_EPS = 1e-7  # log 前对判别器输出的截断
DIVERGENCE_LIMIT = 1e6  # 损失绝对值超过即视为发散
FRECHET_REG = 1e-8  # 协方差正则
MEMBERSHIP_ATOL = 1e-12  # 支撑集距离低于此值视为 0
OOS_CONFIDENCE = 0.99  # 支撑集外质量的置信水平
CHECKPOINT_PRECISION = 17  # 检查点浮点数十进制位数
