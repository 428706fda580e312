"""Tests for datasets, views, projections and the partition operation"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infoforest.core_model import (
    AxisProjection,
    Dataset,
    LabelDistribution,
    LinearProjection,
    SampleView,
    Stump,
    evaluate,
    label_distribution,
    partition,
)
from infoforest.datagen import StripesSpec, gen_stripes
from infoforest.errors import DimensionMismatchError, InvalidInputError, NonFiniteFeatureError

from .conftest import make_dataset


class TestDataset:

    def test_arrays_are_read_only_copies(self):
        features = np.array([[1.0, 2.0], [3.0, 4.0]])
        ds = Dataset(features, np.array([0, 1]))
        features[0, 0] = 99.0
        assert ds.features[0, 0] == 1.0
        assert not ds.features.flags.writeable
        assert not ds.labels.flags.writeable

    def test_rejects_non_finite_features(self):
        with pytest.raises(NonFiniteFeatureError):
            Dataset(np.array([[1.0], [np.nan]]), np.array([0, 1]))

    def test_rejects_non_binary_labels(self):
        with pytest.raises(InvalidInputError):
            Dataset(np.array([[1.0], [2.0]]), np.array([0, 2]))

    def test_rejects_label_count_mismatch(self):
        with pytest.raises(InvalidInputError):
            Dataset(np.array([[1.0], [2.0]]), np.array([0]))

    def test_take_allows_repeats(self):
        ds = make_dataset([[1.0], [2.0], [3.0]], [0, 1, 0])
        bag = ds.take([2, 2, 0])
        assert bag.features[:, 0].tolist() == [3.0, 3.0, 1.0]
        assert bag.labels.tolist() == [0, 0, 0]
        assert not bag.has_both_classes()


class TestSampleView:

    def test_rejects_unsorted_indices(self):
        with pytest.raises(InvalidInputError):
            SampleView(np.array([2, 1]))

    def test_rejects_duplicates(self):
        with pytest.raises(InvalidInputError):
            SampleView(np.array([1, 1]))

    def test_from_indices_checks_range(self):
        with pytest.raises(InvalidInputError):
            SampleView.from_indices([0, 5], n_samples=5)
        assert len(SampleView.from_indices([0, 4], n_samples=5)) == 2


class TestEvaluate:

    def test_axis_projection(self):
        assert evaluate(Stump(AxisProjection(1), 0.0), [3.0, 7.0]) == 7.0

    def test_axis_aligned_linear(self):
        assert evaluate(Stump(LinearProjection((1.0, 0.0)), 0.0), [3.0, 7.0]) == 3.0

    def test_oblique_linear(self):
        assert evaluate(Stump(LinearProjection((0.6, 0.8)), 0.0), [1.0, 1.0]) == pytest.approx(1.4)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            evaluate(Stump(AxisProjection(2), 0.0), [1.0, 2.0])
        with pytest.raises(DimensionMismatchError):
            evaluate(Stump(LinearProjection((0.6, 0.8)), 0.0), [1.0, 2.0, 3.0])

    def test_linear_weights_must_be_unit_norm(self):
        with pytest.raises(InvalidInputError):
            LinearProjection((1.0, 1.0))
        w = LinearProjection.from_direction([3.0, 4.0])
        assert w.weights == pytest.approx((0.6, 0.8))

    def test_axis_value_ignores_other_dimensions(self):
        stump = Stump(AxisProjection(0), 0.0)
        assert evaluate(stump, [2.5, 1.0, -4.0]) == evaluate(stump, [2.5, -4.0, 1.0])


class TestPartition:

    @pytest.fixture
    def line(self):
        return make_dataset([[1.0], [5.0], [9.0]], [0, 1, 1])

    def test_splits_at_threshold(self, line):
        ge, lt = partition(line, line.full_view(), Stump(AxisProjection(0), 4.0))
        assert ge.indices.tolist() == [1, 2]
        assert lt.indices.tolist() == [0]

    def test_ties_go_to_first_set(self, line):
        ge, lt = partition(line, line.full_view(), Stump(AxisProjection(0), 5.0))
        assert ge.indices.tolist() == [1, 2]

    def test_vacuous_splits(self, line):
        ge, lt = partition(line, line.full_view(), Stump(AxisProjection(0), -10.0))
        assert len(ge) == 3 and len(lt) == 0
        ge, lt = partition(line, line.full_view(), Stump(AxisProjection(0), 10.0))
        assert len(ge) == 0 and len(lt) == 3

    @settings(max_examples=60, deadline=None)
    @given(
        values=st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=40),
        threshold=st.floats(-100, 100, allow_nan=False),
        data=st.data(),
    )
    def test_partition_is_exhaustive_and_disjoint(self, values, threshold, data):
        n = len(values)
        ds = make_dataset([[v] for v in values], [i % 2 for i in range(n)])
        subset = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
        view = SampleView(np.array(sorted(subset)))

        ge, lt = partition(ds, view, Stump(AxisProjection(0), threshold))

        assert len(ge) + len(lt) == len(view)
        assert set(ge.indices.tolist()) | set(lt.indices.tolist()) == subset
        assert not set(ge.indices.tolist()) & set(lt.indices.tolist())
        assert all(values[i] >= threshold for i in ge.indices)
        assert all(values[i] < threshold for i in lt.indices)


class TestLabelDistribution:

    def test_counts(self):
        ds = make_dataset([[0.0], [1.0], [2.0]], [1, 1, 0])
        dist = label_distribution(ds, ds.full_view())
        assert (dist.count0, dist.count1) == (1, 2)
        assert dist.posterior == pytest.approx(2 / 3)

    def test_empty_view(self):
        ds = make_dataset([[0.0]], [1])
        dist = label_distribution(ds, SampleView(np.array([], dtype=np.int64)))
        assert (dist.count0, dist.count1) == (0, 0)
        assert dist.posterior == 0.0

    def test_balanced_stripes(self):
        ds = gen_stripes(StripesSpec(n_groups=6, per_group=10))
        dist = label_distribution(ds, ds.full_view())
        assert dist.count0 == dist.count1 == 30

    def test_pure(self):
        assert LabelDistribution(0, 3).is_pure
        assert not LabelDistribution(1, 3).is_pure
