"""Shared fixtures for the infoforest test suite"""

from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from infoforest.core_model import Dataset
from infoforest.datagen import StripesSpec, gen_blobs, gen_stripes
from infoforest.dataset_io import write_dataset_csv
from infoforest.stumps import PoolConfig
from infoforest.tree import TrainConfig


@pytest.fixture
def blobs() -> Dataset:
    return gen_blobs(n_per_class=60, mean_shift=4.0, seed=3)


@pytest.fixture
def stripes() -> Dataset:
    return gen_stripes(StripesSpec(n_groups=4, per_group=30, seed=1))


@pytest.fixture
def small_config() -> TrainConfig:
    """Fast settings: few thresholds, whole dataset per tree"""
    return TrainConfig(pool=PoolConfig(n_thresholds=8), sampling="none")


@pytest.fixture
def bagged_config(small_config) -> TrainConfig:
    return replace(small_config, sampling="bootstrap")


@pytest.fixture
def blobs_csv(tmp_path, blobs) -> Path:
    return write_dataset_csv(blobs, tmp_path / "blobs.csv")


def make_dataset(features, labels) -> Dataset:
    return Dataset(np.asarray(features, dtype=np.float64), np.asarray(labels))


def tree_structure(node):
    """Nested tuples of kinds, stumps and leaf predictions; training diagnostics left out"""
    if node.is_leaf:
        return ("leaf", node.leaf_label, node.leaf_posterior)
    return (node.kind.value, node.stump, tree_structure(node.children[0]), tree_structure(node.children[1]))
