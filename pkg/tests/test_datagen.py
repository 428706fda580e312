"""Tests for the synthetic dataset generators"""

import numpy as np
import pytest

from infoforest.datagen import (
    PART_HALF_WIDTH,
    HiddenPartsSpec,
    StripesSpec,
    gen_blobs,
    gen_hidden_parts,
    gen_shifted_gaussians,
    gen_stripes,
)
from infoforest.errors import InvalidInputError


class TestStripes:

    def test_size_and_balance(self):
        ds = gen_stripes(StripesSpec(n_groups=8, per_group=50, seed=1))
        assert ds.n_samples == 400
        assert ds.dimension == 2
        assert int(ds.labels.sum()) == 200

    def test_groups_alternate(self):
        ds = gen_stripes(StripesSpec(n_groups=4, per_group=20))
        groups = np.floor(ds.features[:, 0]).astype(int)
        assert np.array_equal(ds.labels, (groups % 2 == 0).astype(np.int8))

    def test_deterministic(self):
        spec = StripesSpec(n_groups=3, per_group=10, jitter=0.1, seed=4)
        assert np.array_equal(gen_stripes(spec).features, gen_stripes(spec).features)

    @pytest.mark.parametrize("kwargs", [
        {"n_groups": 1, "per_group": 10},
        {"n_groups": 4, "per_group": 0},
        {"n_groups": 4, "per_group": 10, "jitter": -1.0},
    ])
    def test_invalid_spec(self, kwargs):
        with pytest.raises(InvalidInputError):
            StripesSpec(**kwargs)


class TestHiddenParts:

    def test_size(self):
        ds = gen_hidden_parts(HiddenPartsSpec(n_parts=4, per_part=25, separation=2.0))
        assert ds.n_samples == 200
        assert int(ds.labels.sum()) == 100

    @pytest.mark.parametrize("noise", [0.0, 0.5])
    def test_pooled_measurements_coincide(self, noise):
        ds = gen_hidden_parts(HiddenPartsSpec(n_parts=4, per_part=30, separation=2.0, noise=noise, seed=3))
        measurement = ds.features[:, 1]
        assert np.array_equal(np.sort(measurement[ds.labels == 1]), np.sort(measurement[ds.labels == 0]))

    def test_parts_separate_the_classes(self):
        ds = gen_hidden_parts(HiddenPartsSpec(n_parts=4, per_part=30, separation=2.0))
        part = np.rint(ds.features[:, 0]).astype(int)
        for j in range(4):
            in_part = part == j
            gap = ds.features[in_part & (ds.labels == 1), 1].mean() - ds.features[in_part & (ds.labels == 0), 1].mean()
            assert abs(gap) == pytest.approx(2.0)

    def test_location_band(self):
        ds = gen_hidden_parts(HiddenPartsSpec(n_parts=2, per_part=50, separation=1.0, seed=2))
        offset = ds.features[:, 0] - np.rint(ds.features[:, 0])
        assert np.all(np.abs(offset) <= PART_HALF_WIDTH)

    def test_odd_part_count_warns(self, caplog):
        with caplog.at_level("WARNING", logger="infoforest.datagen"):
            gen_hidden_parts(HiddenPartsSpec(n_parts=3, per_part=5, separation=1.0))
        assert "odd n_parts" in caplog.text

    def test_invalid_spec(self):
        with pytest.raises(InvalidInputError):
            HiddenPartsSpec(n_parts=4, per_part=10, separation=0.0)


class TestGaussians:

    def test_blobs(self):
        ds = gen_blobs(100, 3.0, seed=0)
        assert ds.n_samples == 200
        shift = ds.features[ds.labels == 1, 0].mean() - ds.features[ds.labels == 0, 0].mean()
        assert shift == pytest.approx(3.0, abs=0.5)

    def test_shifted_gaussians_direction(self):
        ds = gen_shifted_gaussians(2_000, [0.0, 2.0, 0.0], 1.5, seed=1)
        diff = ds.features[ds.labels == 1].mean(axis=0) - ds.features[ds.labels == 0].mean(axis=0)
        assert diff == pytest.approx([0.0, 1.5, 0.0], abs=0.15)

    def test_zero_direction_rejected(self):
        with pytest.raises(InvalidInputError):
            gen_shifted_gaussians(10, [0.0, 0.0], 1.0)
