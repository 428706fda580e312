"""
Core data model: immutable datasets, index-subset views, decision stumps
and the partition operation every split is built on
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError, NonFiniteFeatureError

logger = logging.getLogger(__name__)

UNIT_NORM_TOLERANCE = 1e-9


def _frozen_array(values: np.ndarray) -> np.ndarray:
    frozen = np.array(values, copy=True)
    frozen.flags.writeable = False
    return frozen


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Feature matrix (M samples x k dimensions) with binary labels

    Arrays are copied and marked read-only at construction, so a Dataset can be
    shared between tree-training workers without locking.
    """
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)

        if features.ndim != 2:
            raise InvalidInputError(f"features must be a 2-D matrix, got shape {features.shape}")
        if features.shape[0] < 1 or features.shape[1] < 1:
            raise InvalidInputError("dataset needs at least one sample and one dimension")
        if labels.shape != (features.shape[0],):
            raise InvalidInputError(
                f"expected {features.shape[0]} labels, got shape {labels.shape}"
            )
        if not np.all(np.isfinite(features)):
            raise NonFiniteFeatureError("feature matrix contains NaN or infinite values")
        if not np.all((labels == 0) | (labels == 1)):
            raise InvalidInputError("labels must be 0 or 1")

        object.__setattr__(self, "features", _frozen_array(features))
        object.__setattr__(self, "labels", _frozen_array(labels.astype(np.int8)))

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.features.shape[1])

    def full_view(self) -> "SampleView":
        return SampleView(np.arange(self.n_samples, dtype=np.int64))

    def take(self, indices: Sequence[int]) -> "Dataset":
        """New dataset from rows at ``indices`` (repeats allowed, e.g. a bootstrap bag)"""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx])

    def has_both_classes(self) -> bool:
        return bool(np.any(self.labels == 0) and np.any(self.labels == 1))


@dataclass(frozen=True, eq=False)
class SampleView:
    """Ascending, duplicate-free sample indices into a Dataset"""
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise InvalidInputError("view indices must be one-dimensional")
        if idx.size > 1 and not np.all(np.diff(idx) > 0):
            raise InvalidInputError("view indices must be unique and ascending")
        object.__setattr__(self, "indices", _frozen_array(idx))

    @classmethod
    def from_indices(cls, indices: Sequence[int], n_samples: int) -> "SampleView":
        """Validated view; rejects indices outside [0, n_samples)"""
        view = cls(np.asarray(indices, dtype=np.int64))
        if view.indices.size and (view.indices[0] < 0 or view.indices[-1] >= n_samples):
            raise InvalidInputError(f"view indices out of range for {n_samples} samples")
        return view

    def __len__(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleView):
            return NotImplemented
        return np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash(self.indices.tobytes())


@dataclass(frozen=True)
class AxisProjection:
    """f(y) = y[index]"""
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise InvalidInputError(f"axis index must be nonnegative, got {self.index}")

    def check_dimension(self, dimension: int) -> None:
        if self.index >= dimension:
            raise DimensionMismatchError(
                f"axis projection on dimension {self.index} needs k > {self.index}, got k={dimension}"
            )

    def project(self, features: np.ndarray) -> np.ndarray:
        """Project rows of a (n, k) matrix; returns a length-n vector"""
        self.check_dimension(features.shape[1])
        return features[:, self.index].astype(np.float64, copy=True)


@dataclass(frozen=True)
class LinearProjection:
    """f(y) = <w, y> with ||w|| = 1"""
    weights: Tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1 or not np.all(np.isfinite(w)):
            raise InvalidInputError("linear projection needs a finite, nonempty weight vector")
        if abs(float(np.linalg.norm(w)) - 1.0) > UNIT_NORM_TOLERANCE:
            raise InvalidInputError("linear projection weights must have unit norm")
        object.__setattr__(self, "weights", tuple(float(v) for v in w))

    @classmethod
    def from_direction(cls, direction: Sequence[float]) -> "LinearProjection":
        """Normalize an arbitrary nonzero direction to unit length"""
        w = np.asarray(direction, dtype=np.float64)
        norm = float(np.linalg.norm(w))
        if not np.isfinite(norm) or norm == 0.0:
            raise InvalidInputError("cannot normalize a zero or non-finite direction")
        return cls(tuple(w / norm))

    @cached_property
    def _weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.float64)

    def check_dimension(self, dimension: int) -> None:
        if len(self.weights) != dimension:
            raise DimensionMismatchError(
                f"linear projection of length {len(self.weights)} applied to k={dimension}"
            )

    def project(self, features: np.ndarray) -> np.ndarray:
        self.check_dimension(features.shape[1])
        # Column-by-column accumulation keeps each row's result independent of
        # which other rows are in the batch, so routing matches training exactly.
        values = np.zeros(features.shape[0], dtype=np.float64)
        for j, w in enumerate(self._weight_array):
            values += features[:, j] * w
        return values


Projection = Union[AxisProjection, LinearProjection]


@dataclass(frozen=True)
class Stump:
    """Decision stump: sample goes to the first child when f(y) >= threshold"""
    projection: Projection
    threshold: float


@dataclass(frozen=True)
class LabelDistribution:
    count0: int
    count1: int

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> "LabelDistribution":
        counts = np.bincount(np.asarray(labels, dtype=np.int64), minlength=2)
        return cls(count0=int(counts[0]), count1=int(counts[1]))

    @property
    def total(self) -> int:
        return self.count0 + self.count1

    @property
    def is_pure(self) -> bool:
        return self.count0 == 0 or self.count1 == 0

    @property
    def posterior(self) -> float:
        """P(label = 1); 0.0 for an empty distribution"""
        return self.count1 / self.total if self.total else 0.0


def _as_matrix(features: Sequence[float]) -> np.ndarray:
    vector = np.asarray(features, dtype=np.float64)
    if vector.ndim != 1:
        raise InvalidInputError("expected a single feature vector")
    return vector.reshape(1, -1)


def evaluate(stump: Stump, features: Sequence[float]) -> float:
    """
    Compute f(y) for one feature vector; the threshold is not applied here

    Raises:
        DimensionMismatchError: vector length does not fit the projection
    """
    return float(stump.projection.project(_as_matrix(features))[0])


def partition(dataset: Dataset, view: SampleView, stump: Stump) -> Tuple[SampleView, SampleView]:
    """
    Split a view into ({i | f(y_i) >= theta}, complement), both ascending

    Ties at the threshold go to the first set.
    """
    values = stump.projection.project(dataset.features[view.indices])
    mask = values >= stump.threshold
    return SampleView(view.indices[mask]), SampleView(view.indices[~mask])


def label_distribution(dataset: Dataset, view: SampleView) -> LabelDistribution:
    return LabelDistribution.from_labels(dataset.labels[view.indices])
