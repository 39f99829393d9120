"""
实验配置

沿用 ConfigItem(group, name, default, validator, serializer) 的声明方式, 无界面依赖;
文件为 INI 格式, 节: [dataset] [component.N] [model] [train] [eval] [output]。
未知的节或键在开始任何工作之前就报错。
"""

import configparser
import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from ..common.cons import Activation, CouplingUpdate, OptimizerKind, SharingMode, ValueKind
from ..common.exceptions import ConfigError
from ..common.settings import PROJECT_ROOT

# ==================== 校验与序列化 ====================


class ConfigValidator:
    def validate(self, value) -> bool:
        return True


class RangeValidator(ConfigValidator):
    def __init__(self, min_value=None, max_value=None):
        self.min = min_value
        self.max = max_value

    def validate(self, value) -> bool:
        if value is None:
            return True
        if isinstance(value, (list, tuple)):
            return all(self.validate(v) for v in value)
        if isinstance(value, float) and not math.isfinite(value):
            return False
        return (self.min is None or value >= self.min) and (self.max is None or value <= self.max)


class OptionsValidator(ConfigValidator):
    def __init__(self, options):
        if isinstance(options, type) and issubclass(options, Enum):
            options = list(options)
        self.options = list(options)

    def validate(self, value) -> bool:
        return value in self.options


class ConfigSerializer:
    def serialize(self, value) -> str:
        return str(value)

    def deserialize(self, text: str):
        return text


class IntSerializer(ConfigSerializer):
    def deserialize(self, text: str) -> int:
        return int(text)


class FloatSerializer(ConfigSerializer):
    def deserialize(self, text: str) -> float:
        return float(text)


class OptionalFloatSerializer(ConfigSerializer):
    def deserialize(self, text: str) -> Optional[float]:
        return None if text.strip().lower() in ("", "none", "auto") else float(text)


class BoolSerializer(ConfigSerializer):
    TRUE = {"1", "true", "yes", "on"}
    FALSE = {"0", "false", "no", "off"}

    def deserialize(self, text: str) -> bool:
        key = text.strip().lower()
        if key in self.TRUE:
            return True
        if key in self.FALSE:
            return False
        raise ValueError(f"not a boolean: {text!r}")


class EnumSerializer(ConfigSerializer):
    def __init__(self, enum_cls: type[Enum]):
        self.enum_cls = enum_cls

    def serialize(self, value) -> str:
        return value.value

    def deserialize(self, text: str):
        return self.enum_cls(text.strip())


class ListSerializer(ConfigSerializer):
    def __init__(self, cast=float):
        self.cast = cast

    def serialize(self, value) -> str:
        return ", ".join(str(v) for v in value)

    def deserialize(self, text: str) -> list:
        return [self.cast(v) for v in text.split(",") if v.strip()]


class ConfigItem:
    """一个配置项: 所属节 group, 键 name, 默认值, 校验器, 序列化器"""

    def __init__(
        self,
        group: str,
        name: str,
        default: Any,
        validator: Optional[ConfigValidator] = None,
        serializer: Optional[ConfigSerializer] = None,
    ):
        self.group = group
        self.name = name
        self.default = default
        self.validator = validator or ConfigValidator()
        self.serializer = serializer or ConfigSerializer()

    @property
    def key(self) -> str:
        return f"{self.group}.{self.name}"

    def parse(self, text: str):
        try:
            value = self.serializer.deserialize(text)
        except ValueError as e:
            raise ConfigError(f"[{self.group}] {self.name}: cannot parse {text!r} ({e})") from e
        self.check(value)
        return value

    def check(self, value) -> None:
        if not self.validator.validate(value):
            raise ConfigError(f"[{self.group}] {self.name}: invalid value {value!r}")

    def __repr__(self) -> str:
        return f"ConfigItem({self.key})"


class ConfigBase:
    """类属性上的 ConfigItem 集合 + 每个实例自己的取值"""

    # 可以出现多次的节前缀 (例如 component.0, component.1)
    repeated_groups: tuple[str, ...] = ()

    def __init__(self):
        self._values: dict[str, Any] = {item.key: item.default for item in self.items()}
        self.sections: dict[str, dict[str, str]] = {}
        self.path: Optional[Path] = None

    @classmethod
    def items(cls) -> list[ConfigItem]:
        found = []
        for klass in reversed(cls.__mro__):
            for value in vars(klass).values():
                if isinstance(value, ConfigItem):
                    found.append(value)
        return found

    @classmethod
    def groups(cls) -> set[str]:
        return {item.group for item in cls.items()}

    def get(self, item: ConfigItem):
        return self._values[item.key]

    def set(self, item: ConfigItem, value) -> None:
        item.check(value)
        self._values[item.key] = value

    def load(self, path: Path | str) -> "ConfigBase":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        self.path = path
        return self.load_text(path.read_text(encoding="utf-8"), str(path))

    def load_text(self, text: str, source: str = "<text>") -> "ConfigBase":
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=source)
        except configparser.Error as e:
            raise ConfigError(f"{source}: {e}") from e

        by_key = {item.key: item for item in self.items()}
        known_groups = self.groups()
        unknown = []
        for section in parser.sections():
            if section.split(".")[0] in self.repeated_groups:
                self.sections[section] = dict(parser[section])
                continue
            if section not in known_groups:
                unknown.append(f"[{section}]")
                continue
            for key, text_value in parser[section].items():
                item = by_key.get(f"{section}.{key}")
                if item is None:
                    unknown.append(f"[{section}] {key}")
                    continue
                self._values[item.key] = item.parse(text_value)
        if unknown:
            raise ConfigError(f"{source}: unknown config entries: {', '.join(unknown)}")
        self.validate()
        return self

    def validate(self) -> None:
        """子类做跨项校验"""


# ==================== 实验配置 ====================

COMPONENT_KEYS = {
    "kind",
    "center",
    "radius",
    "inner_radius",
    "outer_radius",
    "angle_start",
    "angle_span",
    "angle_start_deg",
    "angle_span_deg",
    "half_widths",
}

_POSITIVE_INT = RangeValidator(1)
_NON_NEGATIVE = RangeValidator(0.0)


class ExperimentConfig(ConfigBase):
    repeated_groups = ("component",)

    # dataset
    datasetN = ConfigItem("dataset", "n", 2000, _POSITIVE_INT, IntSerializer())
    datasetSeed = ConfigItem("dataset", "seed", 0, RangeValidator(0), IntSerializer())
    datasetPi = ConfigItem("dataset", "pi", [], _NON_NEGATIVE, ListSerializer(float))

    # model
    mode = ConfigItem("model", "mode", SharingMode.SINGLE, OptionsValidator(SharingMode), EnumSerializer(SharingMode))
    K = ConfigItem("model", "k", None, RangeValidator(1), IntSerializer())
    latent = ConfigItem("model", "latent", 2, _POSITIVE_INT, IntSerializer())
    gHidden = ConfigItem("model", "g_hidden", [32, 32], _POSITIVE_INT, ListSerializer(int))
    dHidden = ConfigItem("model", "d_hidden", [32, 32], _POSITIVE_INT, ListSerializer(int))
    gActivation = ConfigItem(
        "model", "g_activation", Activation.TANH, OptionsValidator(Activation), EnumSerializer(Activation)
    )
    dActivation = ConfigItem(
        "model", "d_activation", Activation.LEAKY_RELU, OptionsValidator(Activation), EnumSerializer(Activation)
    )
    leakyAlpha = ConfigItem("model", "leaky_alpha", 0.2, _NON_NEGATIVE, FloatSerializer())
    memberWidth = ConfigItem("model", "member_width", "", serializer=ConfigSerializer())
    lam = ConfigItem("model", "lambda", 0.0, _NON_NEGATIVE, FloatSerializer())
    lambdaSweep = ConfigItem("model", "lambda_sweep", [], _NON_NEGATIVE, ListSerializer(float))

    # train
    valueKind = ConfigItem(
        "train", "value_kind", ValueKind.WASSERSTEIN, OptionsValidator(ValueKind), EnumSerializer(ValueKind)
    )
    epochs = ConfigItem("train", "epochs", 1000, _POSITIVE_INT, IntSerializer())
    batchSize = ConfigItem("train", "batch_size", 64, _POSITIVE_INT, IntSerializer())
    nCritic = ConfigItem("train", "n_critic", None, _POSITIVE_INT, IntSerializer())
    learningRate = ConfigItem("train", "learning_rate", None, _NON_NEGATIVE, FloatSerializer())
    optimizer = ConfigItem(
        "train", "optimizer", None, OptionsValidator(list(OptimizerKind) + [None]), EnumSerializer(OptimizerKind)
    )
    rmspropDecay = ConfigItem("train", "rmsprop_decay", 0.99, RangeValidator(0.0, 0.999999), FloatSerializer())
    rmspropEps = ConfigItem("train", "rmsprop_eps", 1e-8, RangeValidator(0.0), FloatSerializer())
    clipC = ConfigItem("train", "clip_c", 0.01, RangeValidator(0.0), FloatSerializer())
    trainSeed = ConfigItem("train", "seed", 0, RangeValidator(0), IntSerializer())
    couplingUpdate = ConfigItem(
        "train",
        "coupling_update",
        CouplingUpdate.PROXIMAL,
        OptionsValidator(CouplingUpdate),
        EnumSerializer(CouplingUpdate),
    )
    evalInterval = ConfigItem("train", "eval_interval", 100, _POSITIVE_INT, IntSerializer())
    showProgress = ConfigItem("train", "show_progress", False, OptionsValidator([True, False]), BoolSerializer())
    workers = ConfigItem("train", "workers", 1, _POSITIVE_INT, IntSerializer())

    # eval
    evalSamples = ConfigItem("eval", "n_samples", 2000, _POSITIVE_INT, IntSerializer())
    oosSamples = ConfigItem("eval", "oos_samples", 100_000, RangeValidator(1000), IntSerializer())
    threshold = ConfigItem("eval", "threshold", None, RangeValidator(0.0), OptionalFloatSerializer())
    knnK = ConfigItem("eval", "knn_k", 3, _POSITIVE_INT, IntSerializer())
    inversionTargets = ConfigItem("eval", "inversion_targets", 100, _POSITIVE_INT, IntSerializer())
    inversionIters = ConfigItem("eval", "inversion_iters", 1000, _POSITIVE_INT, IntSerializer())
    inversionRestarts = ConfigItem("eval", "inversion_restarts", 5, _POSITIVE_INT, IntSerializer())
    inversionLr = ConfigItem("eval", "inversion_lr", 0.05, RangeValidator(0.0), FloatSerializer())
    evalSeed = ConfigItem("eval", "seed", 0, RangeValidator(0), IntSerializer())
    evalFrechet = ConfigItem("eval", "frechet", True, OptionsValidator([True, False]), BoolSerializer())
    evalPrecisionRecall = ConfigItem(
        "eval", "precision_recall", True, OptionsValidator([True, False]), BoolSerializer()
    )
    evalInversion = ConfigItem("eval", "inversion", True, OptionsValidator([True, False]), BoolSerializer())
    evalOos = ConfigItem("eval", "oos", True, OptionsValidator([True, False]), BoolSerializer())
    evalSvg = ConfigItem("eval", "svg", False, OptionsValidator([True, False]), BoolSerializer())

    # output
    outputDir = ConfigItem("output", "dir", "", serializer=ConfigSerializer())

    def validate(self) -> None:
        components = self.component_sections()
        if not components:
            raise ConfigError("at least one [component.N] section is required")
        for name, section in components:
            unknown = set(section) - COMPONENT_KEYS
            if unknown:
                raise ConfigError(f"[{name}] unknown keys: {', '.join(sorted(unknown))}")
        K = len(components)
        pi = self.get(self.datasetPi)
        if pi and len(pi) != K:
            raise ConfigError(f"[dataset] pi has {len(pi)} weights for {K} components")
        if pi and not math.isclose(sum(pi), 1.0, abs_tol=1e-9):
            raise ConfigError(f"[dataset] pi must sum to 1, got {sum(pi)}")
        declared = self.get(self.K)
        if declared is not None and declared != K:
            raise ConfigError(f"[model] k = {declared} but {K} components are declared")
        width = self.get(self.memberWidth).strip().lower()
        if width not in ("", "auto") and not width.isdigit():
            raise ConfigError(f"[model] member_width must be empty, 'auto' or an integer, got {width!r}")
        if self.get(self.lam) > 0 and self.get(self.mode) is not SharingMode.L1:
            raise ConfigError("[model] lambda > 0 requires mode = l1")
        if self.get(self.lambdaSweep) and self.get(self.mode) is not SharingMode.L1:
            raise ConfigError("[model] lambda_sweep requires mode = l1")

    # ---------- 派生对象 ----------

    def component_sections(self) -> list[tuple[str, dict[str, str]]]:
        def index(name: str) -> int:
            _, _, idx = name.partition(".")
            if not idx.isdigit():
                raise ConfigError(f"component section must be [component.N], got [{name}]")
            return int(idx)

        names = sorted(self.sections, key=index)
        if [index(n) for n in names] != list(range(len(names))):
            raise ConfigError(f"component sections must be numbered 0..K-1, got {names}")
        return [(n, self.sections[n]) for n in names]

    def component_specs(self):
        from ..datasets.io import component_from_section

        specs = []
        for name, section in self.component_sections():
            section = dict(section)
            for key in ("angle_start", "angle_span"):
                if f"{key}_deg" in section:
                    section[key] = str(math.radians(float(section.pop(f"{key}_deg"))))
            try:
                specs.append(component_from_section(section))
            except ConfigError as e:
                raise ConfigError(f"[{name}] {e}") from e
        return specs

    @property
    def n_components(self) -> int:
        return len(self.component_sections())

    def mixture_weights(self) -> list[float]:
        pi = self.get(self.datasetPi)
        K = self.n_components
        return list(pi) if pi else [1.0 / K] * K

    def network_specs(self):
        """(生成器 spec, 判别器 spec); member_width 为 auto 时按等价集成规则缩小隐藏层"""
        from ..networks.budget import equivalent_spec
        from ..networks.mlp import MlpSpec
        from ..training.config import default_critic_spec

        alpha = self.get(self.leakyAlpha)
        kind = self.get(self.valueKind)
        head = default_critic_spec(kind).output_activation
        g_sizes = (self.get(self.latent), *self.get(self.gHidden), 2)
        d_sizes = (2, *self.get(self.dHidden), 1)
        g_spec = MlpSpec(g_sizes, self.get(self.gActivation), leaky_alpha=alpha)
        d_spec = MlpSpec(d_sizes, self.get(self.dActivation), head, leaky_alpha=alpha)

        width = self.get(self.memberWidth).strip().lower()
        if width == "auto":
            K = self.n_components
            g_spec, d_spec = equivalent_spec(g_spec, K), equivalent_spec(d_spec, K)
        elif width:
            g_spec, d_spec = g_spec.with_widths(int(width)), d_spec.with_widths(int(width))
        return g_spec, d_spec

    def lambda_values(self) -> list[float]:
        sweep = self.get(self.lambdaSweep)
        return list(sweep) if sweep else [self.get(self.lam)]

    def train_config(self, lam: Optional[float] = None):
        from ..training.config import TrainConfig

        g_spec, d_spec = self.network_specs()
        overrides = dict(
            mode=self.get(self.mode),
            epochs=self.get(self.epochs),
            batch_size=self.get(self.batchSize),
            rmsprop_decay=self.get(self.rmspropDecay),
            rmsprop_eps=self.get(self.rmspropEps),
            clip_c=self.get(self.clipC),
            lam=self.get(self.lam) if lam is None else lam,
            seed=self.get(self.trainSeed),
            coupling_update=self.get(self.couplingUpdate),
            eval_interval=self.get(self.evalInterval),
            show_progress=self.get(self.showProgress),
            workers=self.get(self.workers),
            g_spec=g_spec,
            d_spec=d_spec,
        )
        for item, field_name in (
            (self.nCritic, "n_critic"),
            (self.learningRate, "learning_rate"),
            (self.optimizer, "optimizer"),
        ):
            if self.get(item) is not None:
                overrides[field_name] = self.get(item)
        return TrainConfig.defaults(self.get(self.valueKind), **overrides)

    def eval_settings(self):
        from ..evaluation.report import EvalSettings

        return EvalSettings(
            n_samples=self.get(self.evalSamples),
            oos_samples=self.get(self.oosSamples),
            threshold=self.get(self.threshold),
            knn_k=self.get(self.knnK),
            inversion_targets=self.get(self.inversionTargets),
            inversion_iters=self.get(self.inversionIters),
            inversion_restarts=self.get(self.inversionRestarts),
            inversion_lr=self.get(self.inversionLr),
            seed=self.get(self.evalSeed),
            frechet=self.get(self.evalFrechet),
            precision_recall=self.get(self.evalPrecisionRecall),
            inversion=self.get(self.evalInversion),
            oos=self.get(self.evalOos),
        )

    def override_seed(self, seed: int) -> None:
        """命令行 --seed: 同时覆盖数据、训练与评估的种子"""
        for item in (self.datasetSeed, self.trainSeed, self.evalSeed):
            self.set(item, seed)

    def output_dir(self, override: Optional[Path | str] = None) -> Path:
        if override is not None:
            return Path(override)
        configured = self.get(self.outputDir)
        if configured:
            path = Path(configured)
            return path if path.is_absolute() else PROJECT_ROOT / path
        stem = self.path.stem if self.path is not None else "experiment"
        return PROJECT_ROOT / "runs" / stem


def load_config(path: Path | str) -> ExperimentConfig:
    return ExperimentConfig().load(path)
