"""
Desk-scale acceptance experiments

Run with ``pytest -m slow``; each finishes within a couple of minutes.
"""

from dataclasses import replace

import numpy as np
import pytest

from infoforest import config
from infoforest.bench import METHOD_IF, METHOD_RF, run_stripes_depth
from infoforest.bench_config import ACCEPTANCE_THRESHOLDS, BENCH_DEFAULTS
from infoforest.core_model import AxisProjection, Dataset, SampleView
from infoforest.datagen import HiddenPartsSpec, StripesSpec, gen_blobs, gen_hidden_parts, gen_stripes
from infoforest.divergence import DivergenceConfig, node_divergence
from infoforest.forest import accuracy, deserialize, serialize, train_forest
from infoforest.stumps import FeaturePool, PoolConfig
from infoforest.tree import TrainConfig

from .conftest import tree_structure
from .test_divergence import oracle_projection_divergence

pytestmark = pytest.mark.slow


def _random_dataset(i):
    if i % 2:
        return gen_blobs(50 + 10 * i, 1.0 + 0.2 * i, seed=i)
    return gen_stripes(StripesSpec(n_groups=2 + i % 7, per_group=20 + 5 * i, jitter=0.05, seed=i))


@pytest.mark.parametrize("i", range(20))
def test_tau_zero_reduces_to_random_forest(i):
    ds = _random_dataset(i)
    cfg = TrainConfig(pool=PoolConfig(n_thresholds=8))
    forest = train_forest(ds, replace(cfg, tau=0.0), 3, seed=i)
    reference = train_forest(ds, replace(cfg, divergence_test=False), 3, seed=i)

    assert [tree_structure(t.root) for t in forest.trees] == [tree_structure(t.root) for t in reference.trees]
    assert all(s.n_kl_nodes == 0 for s in forest.stats())


def test_stripes_depth():
    base = TrainConfig.from_args(config.resolve_train_args(preset=BENCH_DEFAULTS['stripes_args']))
    report, chosen_tau = run_stripes_depth(
        [4, 8, 16], n_trees=1, repeats=5, base_config=base,
        tau_grid=BENCH_DEFAULTS['tau_grid'], per_group=100, seed=0,
    )
    depth = report.groupby(["method", "n_groups"])["max_depth"].mean()

    assert depth[(METHOD_RF, 4)] < depth[(METHOD_RF, 8)] < depth[(METHOD_RF, 16)]
    assert depth[(METHOD_RF, 16)] >= depth[(METHOD_RF, 4)] + ACCEPTANCE_THRESHOLDS['min_rf_depth_growth']
    assert depth[(METHOD_IF, 16)] < depth[(METHOD_RF, 16)]
    assert chosen_tau in BENCH_DEFAULTS['tau_grid']
    assert (report.loc[report["method"] == METHOD_RF, "train_acc"] == 1.0).all()
    assert (report.loc[report["method"] == METHOD_IF, "train_acc"] > 0.5).all()


class TestHiddenParts:

    @pytest.fixture(scope="class")
    def parts(self):
        return gen_hidden_parts(HiddenPartsSpec(n_parts=4, per_part=100, separation=2.0, noise=0.5, seed=0))

    def test_whole_dataset_looks_alike(self, parts):
        pool = FeaturePool((AxisProjection(1),))
        value = node_divergence(parts, parts.full_view(), pool, DivergenceConfig())
        oracle = oracle_projection_divergence(parts.features[:, 1].tolist(), parts.labels.tolist(), 16, 1.0)

        assert value == pytest.approx(oracle, abs=1e-9)
        assert value < ACCEPTANCE_THRESHOLDS['max_whole_divergence']

    def test_every_part_separates(self, parts):
        pool = FeaturePool((AxisProjection(1),))
        part = np.rint(parts.features[:, 0]).astype(int)
        for j in range(4):
            view = SampleView(np.flatnonzero(part == j))
            value = node_divergence(parts, view, pool, DivergenceConfig())
            oracle = oracle_projection_divergence(
                parts.features[view.indices, 1].tolist(), parts.labels[view.indices].tolist(), 16, 1.0,
            )
            assert value == pytest.approx(oracle, abs=1e-9)
            assert value > ACCEPTANCE_THRESHOLDS['min_part_divergence']

    def test_information_forest_accuracy(self, parts):
        test = gen_hidden_parts(HiddenPartsSpec(n_parts=4, per_part=100, separation=2.0, noise=0.5, seed=1))
        forest = train_forest(parts, TrainConfig(), 32, seed=0)
        assert accuracy(forest, test) >= ACCEPTANCE_THRESHOLDS['min_hidden_parts_accuracy']


def test_serialization_round_trip_on_random_forests():
    for i in range(50):
        rng = np.random.default_rng(i)
        n = int(rng.integers(10, 60))
        features = rng.normal(size=(n, int(rng.integers(1, 4))))
        labels = np.arange(n) % 2
        ds = Dataset(features, labels)
        cfg = TrainConfig(tau=float(rng.choice([0.0, 0.5, 2.0])), pool=PoolConfig(n_thresholds=6))
        forest = train_forest(ds, cfg, 2, seed=i)

        assert deserialize(serialize(forest)) == forest
