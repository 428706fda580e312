"""Tests for hyperparameter resolution and YAML overrides"""

import pytest

from infoforest import config
from infoforest.errors import InvalidInputError
from infoforest.tree import TrainConfig


def test_defaults_build_a_config():
    cfg = TrainConfig.from_args(config.resolve_train_args())
    assert cfg.tau == 0.5
    assert cfg.delta == 0.01
    assert cfg.divergence.bins == 16
    assert cfg.pool.n_thresholds == 16


def test_yaml_overrides_defaults_and_flags_override_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("tau: 1.0\nbins: 8\nsymmetrize: true\n")

    resolved = config.resolve_train_args({"tau": 0.25, "delta": None}, path)
    assert resolved["tau"] == 0.25
    assert resolved["bins"] == 8
    assert resolved["symmetrize"] is True
    assert resolved["delta"] == config.DEFAULT_TRAIN_ARGS["delta"]


def test_preset_sits_between_defaults_and_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("bins: 8\n")
    resolved = config.resolve_train_args({"n_linear": 2}, path, preset={"bins": 4, "delta": 0.0, "n_linear": 0})
    assert resolved["bins"] == 8
    assert resolved["delta"] == 0.0
    assert resolved["n_linear"] == 2
    assert resolved["tau"] == config.DEFAULT_TRAIN_ARGS["tau"]


def test_unknown_yaml_key(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("taux: 1.0\n")
    with pytest.raises(InvalidInputError, match="taux"):
        config.load_config_file(path)


def test_non_mapping_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(InvalidInputError):
        config.load_config_file(path)


def test_empty_yaml_is_no_override(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("")
    assert config.load_config_file(path) == {}


@pytest.mark.parametrize("overrides", [
    {"tau": -1.0},
    {"sampling": "jackknife"},
    {"bins": 1},
    {"subsample_fraction": 0.0},
])
def test_invalid_values_rejected(overrides):
    with pytest.raises(InvalidInputError):
        TrainConfig.from_args(config.resolve_train_args(overrides))


def test_config_dict_round_trip():
    cfg = TrainConfig.from_args(config.resolve_train_args({"pool_scope": "tree", "sampling": "subsample"}))
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg
