"""Tests for the IF vs RF benchmark harness"""

from dataclasses import replace

from infoforest import config
from infoforest.bench import METHOD_IF, METHOD_RF, run_hidden_parts, run_stripes_depth, tune_tau
from infoforest.bench_config import BENCH_DEFAULTS, REPORT_COLUMNS
from infoforest.datagen import StripesSpec, gen_stripes
from infoforest.divergence import DivergenceConfig
from infoforest.forest import accuracy, train_forest
from infoforest.tree import TrainConfig


def test_stripes_report_shape(small_config):
    report, chosen_tau = run_stripes_depth([2, 4], n_trees=1, repeats=2, base_config=small_config,
                                           tau_grid=[0.5, 1.0], per_group=20, seed=0)
    assert list(report.columns) == REPORT_COLUMNS
    assert len(report) == 2 * 2 * 2
    assert chosen_tau in (0.5, 1.0)
    assert set(report["method"]) == {METHOD_RF, METHOD_IF}
    assert (report.loc[report["method"] == METHOD_RF, "kl_nodes"] == 0).all()
    assert report["test_acc"].between(0.0, 1.0).all()


def test_single_value_grid_is_chosen(small_config):
    assert tune_tau(4, 20, 1, 1, small_config, [0.75], seed=0) == 0.75


def test_hidden_parts_report(small_config):
    cfg = replace(small_config, divergence=DivergenceConfig(bins=8))
    report = run_hidden_parts(4, 20, 2.0, 0.0, n_trees=2, repeats=2, base_config=cfg, tau=0.5, seed=1)
    assert list(report.columns) == REPORT_COLUMNS
    assert len(report) == 4
    assert (report["n_groups"] == 4).all()
    assert report["train_acc"].between(0.0, 1.0).all()


def test_stripes_preset_random_forest_peels_one_group_per_level():
    args = config.resolve_train_args(preset=BENCH_DEFAULTS['stripes_args'])
    cfg = replace(TrainConfig.from_args(args), sampling="none", divergence_test=False)
    ds = gen_stripes(StripesSpec(n_groups=8, per_group=50, seed=0))
    forest = train_forest(ds, cfg, 1, seed=0)

    assert forest.stats()[0].depth == 7
    assert accuracy(forest, ds) == 1.0
