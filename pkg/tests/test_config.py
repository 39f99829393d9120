"""实验配置的解析与校验"""

import math

import pytest

from src.getain.common.cons import Activation, CouplingUpdate, OptimizerKind, OutputActivation, SharingMode, ValueKind
from src.getain.common.config import ExperimentConfig, load_config
from src.getain.common.exceptions import ConfigError
from src.getain.common.settings import CONFIGS_DIR
from src.getain.datasets import ComponentSpec

from .conftest import SMALL_EXPERIMENT


def _text(mode="single", eval_interval=2, model_extra="") -> str:
    return SMALL_EXPERIMENT.format(mode=mode, eval_interval=eval_interval, model_extra=model_extra)


def _load(text: str) -> ExperimentConfig:
    return ExperimentConfig().load_text(text)


class TestShippedConfigs:
    @pytest.mark.parametrize("path", sorted(CONFIGS_DIR.glob("*.ini")), ids=lambda p: p.stem)
    def test_config_builds_everything(self, path):
        cfg = load_config(path)
        specs = cfg.component_specs()
        assert len(specs) == cfg.n_components >= 1
        assert math.isclose(sum(cfg.mixture_weights()), 1.0)
        for lam in cfg.lambda_values():
            train_cfg = cfg.train_config(lam)
            assert train_cfg.lam == lam
        cfg.eval_settings()

    def test_sweep_values(self):
        cfg = load_config(CONFIGS_DIR / "lambda_sweep.ini")
        assert cfg.lambda_values() == [0.0, 0.001, 0.01]


class TestParsing:
    def test_small_experiment(self):
        cfg = _load(_text())
        assert cfg.get(cfg.mode) is SharingMode.SINGLE
        assert cfg.component_specs() == [
            ComponentSpec.disk((-3.0, 0.0), 1.0),
            ComponentSpec.disk((3.0, 0.0), 1.0),
        ]
        train_cfg = cfg.train_config()
        assert train_cfg.g_spec.layer_sizes == (2, 8, 2)
        assert train_cfg.d_spec.layer_sizes == (2, 8, 1)
        assert train_cfg.epochs == 4 and train_cfg.eval_interval == 2

    def test_vanilla_defaults(self):
        text = _text().replace("seed = 0\n\n[eval]", "seed = 0\nvalue_kind = vanilla\n\n[eval]")
        train_cfg = _load(text).train_config()
        assert train_cfg.value_kind is ValueKind.VANILLA
        assert train_cfg.optimizer is OptimizerKind.SGD
        assert train_cfg.learning_rate == 1e-3
        assert train_cfg.n_critic == 1
        assert train_cfg.d_spec.output_activation is OutputActivation.SIGMOID

    def test_angles_in_degrees(self):
        text = _text().replace(
            "kind = disk\ncenter = 3, 0\nradius = 1",
            "kind = annulus_arc\ncenter = 3, 0\ninner_radius = 0.5\nouter_radius = 1\n"
            "angle_start_deg = 90\nangle_span_deg = 180",
        )
        arc = _load(text).component_specs()[1]
        assert arc == ComponentSpec.annulus_arc((3.0, 0.0), 0.5, 1.0, math.pi / 2, math.pi)

    def test_network_defaults(self):
        text = _text().replace("g_hidden = 8\nd_hidden = 8\ng_activation = tanh\nd_activation = tanh\n", "")
        train_cfg = _load(text).train_config()
        assert train_cfg.g_spec.layer_sizes == (2, 32, 32, 2)
        assert train_cfg.g_spec.hidden_activation is Activation.TANH
        assert train_cfg.d_spec.layer_sizes == (2, 32, 32, 1)
        assert train_cfg.d_spec.hidden_activation is Activation.LEAKY_RELU
        assert train_cfg.d_spec.leaky_alpha == 0.2
        assert train_cfg.coupling_update is CouplingUpdate.PROXIMAL

    def test_split_activations(self):
        text = _text().replace("d_activation = tanh", "d_activation = relu")
        g_spec, d_spec = _load(text).network_specs()
        assert g_spec.hidden_activation is Activation.TANH
        assert d_spec.hidden_activation is Activation.RELU
        with pytest.raises(ConfigError):
            _load(_text().replace("g_activation = tanh", "hidden_activation = tanh"))

    def test_member_width(self):
        cfg = _load(_text(mode="independent", model_extra="member_width = 4"))
        g_spec, d_spec = cfg.network_specs()
        assert g_spec.layer_sizes == (2, 4, 2) and d_spec.layer_sizes == (2, 4, 1)

    def test_override_seed(self):
        cfg = _load(_text())
        cfg.override_seed(7)
        assert cfg.get(cfg.datasetSeed) == cfg.get(cfg.trainSeed) == cfg.get(cfg.evalSeed) == 7

    def test_output_dir(self, tmp_path):
        cfg = _load(_text())
        assert cfg.output_dir(tmp_path) == tmp_path
        assert cfg.output_dir().name == "experiment"


class TestRejected:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            _load(_text(model_extra="colour = red"))

    def test_unknown_section(self):
        with pytest.raises(ConfigError):
            _load(_text() + "\n[plots]\nsize = 3\n")

    def test_unknown_component_key(self):
        with pytest.raises(ConfigError):
            _load(_text().replace("radius = 1", "radius = 1\nheight = 2", 1))

    def test_bad_values(self):
        with pytest.raises(ConfigError):
            _load(_text(mode="bagging"))
        with pytest.raises(ConfigError):
            _load(_text().replace("epochs = 4", "epochs = 0"))
        with pytest.raises(ConfigError):
            _load(_text().replace("epochs = 4", "epochs = four"))

    def test_lambda_needs_l1_mode(self):
        with pytest.raises(ConfigError):
            _load(_text(mode="independent", model_extra="lambda = 0.1"))
        with pytest.raises(ConfigError):
            _load(_text(mode="independent", model_extra="lambda_sweep = 0, 0.1"))
        _load(_text(mode="l1", model_extra="lambda = 0.1"))

    def test_weights_match_components(self):
        with pytest.raises(ConfigError):
            _load(_text().replace("pi = 0.5, 0.5", "pi = 1.0"))
        with pytest.raises(ConfigError):
            _load(_text().replace("pi = 0.5, 0.5", "pi = 0.5, 0.6"))

    def test_missing_components(self):
        text = _text().split("[component.0]")[0] + "[model]\nmode = single\n"
        with pytest.raises(ConfigError):
            _load(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.ini")
