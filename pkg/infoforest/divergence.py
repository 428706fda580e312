"""
Histogram density estimates, label entropy, KL divergence and the split
scores used by the tree trainer

All quantities are in nats. The only divergence ever computed is between
1-D projections of the class-conditional samples; the max over a feature
pool is a lower bound on the full multivariate divergence.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import entr, rel_entr

from .core_model import Dataset, LabelDistribution, SampleView, Stump, label_distribution, partition
from .errors import InvalidInputError, NonFiniteFeatureError
from .stumps import FeaturePool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DivergenceConfig:
    """
    Args:
        bins: equal-width bins per projection histogram
        smoothing: pseudo-count added to every bin
        symmetrize: use kl(p, q) + kl(q, p) (Jeffreys) instead of kl(p, q)
    """
    bins: int = 16
    smoothing: float = 1.0
    symmetrize: bool = False

    def __post_init__(self):
        if self.bins < 2:
            raise InvalidInputError(f"bins must be at least 2, got {self.bins}")
        if not self.smoothing > 0:
            raise InvalidInputError(f"smoothing must be positive, got {self.smoothing}")


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    mass: np.ndarray
    raw_count: int


def bin_edges(values: np.ndarray, bins: int) -> Optional[np.ndarray]:
    """Equal-width edges spanning [min, max]; None for a degenerate (constant) range"""
    lo, hi = float(np.min(values)), float(np.max(values))
    if not lo < hi:
        return None
    edges = np.linspace(lo, hi, bins + 1)
    if not np.all(np.diff(edges) > 0):
        return None
    return edges


def _bin_counts(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    n_bins = edges.size - 1
    idx = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, n_bins - 1)
    return np.bincount(idx, minlength=n_bins)


def build_histogram(values, edges, smoothing: float) -> Histogram:
    """
    Laplace-smoothed histogram: mass[b] = (count_b + a) / (n + B a)

    Values outside the edges are clamped into the first/last bin.
    """
    edges = np.asarray(edges, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64).ravel()

    if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0):
        raise InvalidInputError("histogram edges must be strictly increasing with at least one bin")
    if not smoothing > 0:
        raise InvalidInputError("smoothing must be positive")
    if not np.all(np.isfinite(values)):
        raise NonFiniteFeatureError("histogram values must be finite")

    n_bins = edges.size - 1
    counts = _bin_counts(values, edges) if values.size else np.zeros(n_bins, dtype=np.int64)
    mass = (counts + smoothing) / (values.size + n_bins * smoothing)
    return Histogram(edges=edges, mass=mass, raw_count=int(values.size))


def binary_entropy(count1, total):
    """Vectorized label entropy from class-1 counts and totals; 0 where total == 0"""
    count1 = np.asarray(count1, dtype=np.float64)
    total = np.asarray(total, dtype=np.float64)
    p = np.where(total > 0, count1 / np.where(total > 0, total, 1.0), 0.0)
    return entr(p) + entr(1.0 - p)


def entropy(dist: LabelDistribution) -> float:
    """Shannon entropy -sum p ln p of a label distribution; 0 when empty or pure"""
    return float(binary_entropy(dist.count1, dist.total))


def kl(p: Histogram, q: Histogram) -> float:
    """KL(p || q) = sum_b p_b ln(p_b / q_b)"""
    if p.edges.shape != q.edges.shape or not np.array_equal(p.edges, q.edges):
        raise InvalidInputError("kl needs histograms built on identical edges")
    # rounding can leave a tiny negative sum for near-identical inputs
    return max(0.0, float(np.sum(rel_entr(p.mass, q.mass))))


def divergence(p: Histogram, q: Histogram, cfg: DivergenceConfig) -> float:
    """Divergence selected by the config: kl(p, q), or kl(p, q) + kl(q, p) when symmetrized"""
    if cfg.symmetrize:
        return kl(p, q) + kl(q, p)
    return kl(p, q)


def projection_divergence(values: np.ndarray, labels: np.ndarray, cfg: DivergenceConfig) -> float:
    """
    Divergence between class-1 and class-0 histograms of one projected column

    Both histograms share edges spanning the pooled range; a constant column
    carries no class information and scores 0.
    """
    edges = bin_edges(values, cfg.bins)
    if edges is None:
        return 0.0
    positive = build_histogram(values[labels == 1], edges, cfg.smoothing)
    negative = build_histogram(values[labels == 0], edges, cfg.smoothing)
    return divergence(positive, negative, cfg)


def divergence_from_values(values: np.ndarray, labels: np.ndarray,
                           cfg: DivergenceConfig) -> Optional[float]:
    """
    Max projection divergence over the columns of an (n, P) value matrix

    Returns None when fewer than two classes are present (single-class outcome).
    """
    labels = np.asarray(labels)
    if labels.size == 0 or np.all(labels == labels[0]):
        return None
    return max(projection_divergence(values[:, j], labels, cfg) for j in range(values.shape[1]))


def node_divergence(dataset: Dataset, view: SampleView, pool: FeaturePool,
                    cfg: DivergenceConfig) -> Optional[float]:
    """
    Lower-bound estimate of the class-conditional divergence within a node

    Returns:
        max over pool projections of the projected divergence, or None when
        the view holds a single class (or nothing) and the divergence is undefined
    """
    features = dataset.features[view.indices]
    labels = dataset.labels[view.indices]
    return divergence_from_values(pool.project(features), labels, cfg)


def score_kl_split(dataset: Dataset, view: SampleView, stump: Stump, pool: FeaturePool,
                   cfg: DivergenceConfig) -> float:
    """
    Weighted child divergence (|S|/|view|) d(S) + (|S^c|/|view|) d(S^c)

    Children that are empty or single-class contribute 0.
    """
    if len(view) == 0:
        raise InvalidInputError("cannot score a split of an empty view")
    total = 0.0
    for child in partition(dataset, view, stump):
        if len(child) == 0:
            continue
        child_div = node_divergence(dataset, child, pool, cfg)
        if child_div is not None:
            total += len(child) / len(view) * child_div
    return total


def score_entropy_split(dataset: Dataset, view: SampleView, stump: Stump) -> float:
    """Weighted label entropy of the two children; weights are child sizes over |view|"""
    if len(view) == 0:
        raise InvalidInputError("cannot score a split of an empty view")
    total = 0.0
    for child in partition(dataset, view, stump):
        if len(child) == 0:
            continue
        total += len(child) / len(view) * entropy(label_distribution(dataset, child))
    return total
