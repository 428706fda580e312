"""
Synthetic dataset generators
Alternating stripes (deep-tree regime), hidden parts (globally identical
class-conditional marginals that differ within parts) and Gaussian blobs
All generators are pure functions of their spec (seeded numpy generators)
"""

import logging
from dataclasses import dataclass

import numpy as np

from .core_model import Dataset
from .errors import InvalidInputError

logger = logging.getLogger(__name__)

# half-width of the dim-0 band each hidden part occupies around its center
PART_HALF_WIDTH = 0.25


@dataclass(frozen=True)
class StripesSpec:
    """n_groups unit-width groups on dim 0 with alternating labels (group 0 -> 1)"""
    n_groups: int
    per_group: int
    jitter: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_groups < 2:
            raise InvalidInputError("stripes need at least 2 groups")
        if self.per_group < 1:
            raise InvalidInputError("stripes need at least 1 sample per group")
        if self.jitter < 0:
            raise InvalidInputError("jitter must be nonnegative")


@dataclass(frozen=True)
class HiddenPartsSpec:
    """
    n_parts parts along dim 0; within a part the classes differ by
    ``separation`` on dim 1, but pooled over parts the dim-1 marginals agree
    """
    n_parts: int
    per_part: int
    separation: float
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_parts < 2:
            raise InvalidInputError("hidden parts need at least 2 parts")
        if self.per_part < 1:
            raise InvalidInputError("hidden parts need at least 1 sample per part and class")
        if not self.separation > 0:
            raise InvalidInputError("separation must be positive")
        if self.noise < 0:
            raise InvalidInputError("noise must be nonnegative")


def gen_stripes(spec: StripesSpec) -> Dataset:
    """
    Group g occupies [g, g+1) on dim 0 (uniform), dim 1 is uniform [0, 1)
    nuisance; Gaussian jitter of scale ``spec.jitter`` is added to dim 0
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_groups * spec.per_group

    groups = np.repeat(np.arange(spec.n_groups), spec.per_group)
    x0 = groups + rng.uniform(0.0, 1.0, size=n)
    x1 = rng.uniform(0.0, 1.0, size=n)
    x0 = x0 + spec.jitter * rng.standard_normal(n)

    labels = np.where(groups % 2 == 0, 1, 0)
    logger.debug(f"stripes: {spec.n_groups} groups x {spec.per_group} samples")
    return Dataset(np.column_stack([x0, x1]), labels)


def gen_hidden_parts(spec: HiddenPartsSpec) -> Dataset:
    """
    Dim 0 codes the part (centered at j), dim 1 is the measurement

    Parts are paired (2m, 2m+1) and each pair shares two noise draws a, b:
        part 2m:   class 1 = +s/2 + a,  class 0 = -s/2 + b
        part 2m+1: class 1 = -s/2 + b,  class 0 = +s/2 + a
    so the pooled class-1 and class-0 measurement multisets are identical
    while every single part separates the class means by s (exactly when
    noise = 0). An odd trailing part has no partner and breaks the equality.
    """
    rng = np.random.default_rng(spec.seed)
    half = spec.separation / 2.0
    m = spec.per_part

    if spec.n_parts % 2:
        logger.warning(f"hidden parts: odd n_parts={spec.n_parts}, pooled marginals will not cancel exactly")

    features, labels = [], []

    def emit(part: int, label: int, measurement: np.ndarray) -> None:
        location = part + rng.uniform(-PART_HALF_WIDTH, PART_HALF_WIDTH, size=m)
        features.append(np.column_stack([location, measurement]))
        labels.append(np.full(m, label, dtype=np.int8))

    for first in range(0, spec.n_parts, 2):
        a = spec.noise * rng.standard_normal(m)
        b = spec.noise * rng.standard_normal(m)
        emit(first, 1, half + a)
        emit(first, 0, -half + b)
        if first + 1 < spec.n_parts:
            emit(first + 1, 1, -half + b)
            emit(first + 1, 0, half + a)

    return Dataset(np.vstack(features), np.concatenate(labels))


def gen_blobs(n_per_class: int, mean_shift: float, seed: int = 0) -> Dataset:
    """Two isotropic unit-variance 2-D Gaussians, class 1 shifted by mean_shift on dim 0"""
    if n_per_class < 1:
        raise InvalidInputError("blobs need at least 1 sample per class")
    rng = np.random.default_rng(seed)
    negative = rng.standard_normal((n_per_class, 2))
    positive = rng.standard_normal((n_per_class, 2))
    positive[:, 0] += mean_shift

    features = np.vstack([positive, negative])
    labels = np.concatenate([np.ones(n_per_class, dtype=np.int8),
                             np.zeros(n_per_class, dtype=np.int8)])
    return Dataset(features, labels)


def gen_shifted_gaussians(n_per_class: int, direction, shift: float, seed: int = 0) -> Dataset:
    """
    Two isotropic unit-covariance Gaussians in len(direction) dimensions whose
    means differ by ``shift`` along the unit vector ``direction``; the true
    class-conditional KL is shift**2 / 2
    """
    u = np.asarray(direction, dtype=np.float64)
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        raise InvalidInputError("direction must be nonzero")
    u = u / norm

    rng = np.random.default_rng(seed)
    negative = rng.standard_normal((n_per_class, u.size))
    positive = rng.standard_normal((n_per_class, u.size)) + shift * u
    labels = np.concatenate([np.ones(n_per_class, dtype=np.int8),
                             np.zeros(n_per_class, dtype=np.int8)])
    return Dataset(np.vstack([positive, negative]), labels)
