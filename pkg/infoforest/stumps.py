"""
Feature pools (the finite family F of candidate projections) and candidate
threshold grids (the finite set of thresholds searched per projection)
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core_model import AxisProjection, Dataset, LinearProjection, Projection, SampleView
from .errors import InvalidInputError

logger = logging.getLogger(__name__)

POOL_SCOPES = ("node", "tree")


@dataclass(frozen=True)
class PoolConfig:
    """
    Args:
        n_axis: axis projections sampled per pool (all dimensions when >= k)
        n_linear: random unit-norm linear projections per pool
        n_thresholds: candidate thresholds per projection
        scope: "node" draws a fresh pool at every node, "tree" once per tree
    """
    n_axis: int = 2
    n_linear: int = 1
    n_thresholds: int = 16
    scope: str = "node"

    def __post_init__(self):
        if self.n_axis < 0 or self.n_linear < 0:
            raise InvalidInputError("pool sizes must be nonnegative")
        if self.n_axis + self.n_linear < 1:
            raise InvalidInputError("feature pool needs at least one projection")
        if self.n_thresholds < 1:
            raise InvalidInputError("n_thresholds must be at least 1")
        if self.scope not in POOL_SCOPES:
            raise InvalidInputError(f"pool scope must be one of {POOL_SCOPES}, got {self.scope!r}")


@dataclass(frozen=True)
class FeaturePool:
    projections: Tuple[Projection, ...]
    generation_seed: Optional[int] = None

    def __post_init__(self):
        if not self.projections:
            raise InvalidInputError("feature pool must not be empty")

    def __len__(self) -> int:
        return len(self.projections)

    def project(self, features: np.ndarray) -> np.ndarray:
        """(n, k) features -> (n, P) projected values, one column per projection"""
        columns = [projection.project(features) for projection in self.projections]
        return np.column_stack(columns) if columns else np.empty((features.shape[0], 0))


def generate_pool(dim: int, cfg: PoolConfig, rng: np.random.Generator) -> FeaturePool:
    """
    Draw a random feature pool

    A generation seed is drawn from ``rng`` first and the pool is built from a
    generator seeded with it, so the pool is a pure function of that seed.
    """
    if dim < 1:
        raise InvalidInputError(f"dimension must be positive, got {dim}")

    generation_seed = int(rng.integers(0, 2**63 - 1))
    local = np.random.default_rng(generation_seed)

    n_axis = min(cfg.n_axis, dim)
    axes = np.sort(local.choice(dim, size=n_axis, replace=False)) if n_axis else []
    projections: List[Projection] = [AxisProjection(int(a)) for a in axes]

    for _ in range(cfg.n_linear):
        direction = local.standard_normal(dim)
        # a zero draw has probability 0; redraw rather than divide by zero
        while not np.any(direction):
            direction = local.standard_normal(dim)
        projections.append(LinearProjection.from_direction(direction))

    return FeaturePool(tuple(projections), generation_seed)


def thresholds_from_values(values: np.ndarray, n_thresholds: int) -> np.ndarray:
    """
    Quantile-midpoint thresholds for one column of projected values

    For q = 1..T the order statistic at position floor(q * n / (T + 1)) is
    paired with the next larger distinct value and their midpoint kept.
    Every returned threshold has samples strictly on both sides.
    """
    s = np.sort(np.asarray(values, dtype=np.float64))
    n = s.size
    if n < 2 or s[0] == s[-1]:
        return np.empty(0, dtype=np.float64)

    q = np.arange(1, n_thresholds + 1)
    positions = np.clip((q * n) // (n_thresholds + 1), 1, n - 1)
    lo = s[positions - 1]

    # next distinct value above lo; at the top of the range step back instead
    upper_idx = np.searchsorted(s, lo, side="right")
    at_top = upper_idx >= n
    hi = s[np.minimum(upper_idx, n - 1)]
    lower_idx = np.searchsorted(s, lo, side="left") - 1
    lo = np.where(at_top, s[np.maximum(lower_idx, 0)], lo)
    hi = np.where(at_top, s[-1], hi)

    mid = lo + (hi - lo) / 2.0
    # adjacent floats: the midpoint can round onto lo, which would be vacuous
    mid = np.where(mid <= lo, hi, mid)
    return np.unique(mid)


def candidate_thresholds(dataset: Dataset, view: SampleView, projection: Projection,
                         n_thresholds: int) -> List[float]:
    """Ascending candidate thresholds for ``projection`` over the samples in ``view``"""
    if len(view) == 0:
        raise InvalidInputError("candidate thresholds need a nonempty view")
    values = projection.project(dataset.features[view.indices])
    return [float(t) for t in thresholds_from_values(values, n_thresholds)]
