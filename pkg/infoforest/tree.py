"""
Single-tree training and inference

Every node first runs the forced-leaf guards, then the divergence test:
a node whose class-conditional projections already differ by more than tau
becomes an H-node (entropy split, leaf if the information gain is <= delta);
otherwise it becomes a KL-node that regroups the data by maximizing the
weighted divergence of its children. With tau = 0 every internal node is an
H-node, which is the plain Random Forest tree.
"""

import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core_model import Dataset, LabelDistribution, SampleView, Stump
from .divergence import DivergenceConfig, binary_entropy, divergence_from_values, entropy
from .errors import DimensionMismatchError, InvalidInputError
from .stumps import FeaturePool, PoolConfig, generate_pool, thresholds_from_values

logger = logging.getLogger(__name__)

SAMPLING_MODES = ("bootstrap", "subsample", "none")


class NodeKind(str, Enum):
    KL_NODE = "kl"
    H_NODE = "h"
    LEAF = "leaf"


@dataclass(frozen=True)
class NodeDiagnostics:
    """Training-time measurements kept on every node"""
    n_samples: int
    divergence: Optional[float] = None
    split_score: Optional[float] = None
    gain: Optional[float] = None


@dataclass(frozen=True)
class Node:
    kind: NodeKind
    diagnostics: NodeDiagnostics
    stump: Optional[Stump] = None
    children: Optional[Tuple["Node", "Node"]] = None
    leaf_label: Optional[int] = None
    leaf_posterior: Optional[float] = None

    def __post_init__(self):
        if self.kind is NodeKind.LEAF:
            if self.stump is not None or self.children is not None:
                raise InvalidInputError("a leaf carries neither stump nor children")
            if self.leaf_label not in (0, 1) or self.leaf_posterior is None:
                raise InvalidInputError("a leaf needs a binary label and a posterior")
            if not 0.0 <= self.leaf_posterior <= 1.0:
                raise InvalidInputError(f"leaf posterior {self.leaf_posterior} outside [0, 1]")
        else:
            if self.stump is None or self.children is None or len(self.children) != 2:
                raise InvalidInputError("an internal node needs a stump and two children")
            if self.leaf_label is not None or self.leaf_posterior is not None:
                raise InvalidInputError("an internal node carries no leaf prediction")

    @property
    def is_leaf(self) -> bool:
        return self.kind is NodeKind.LEAF

    @classmethod
    def leaf(cls, dist: LabelDistribution, diagnostics: NodeDiagnostics) -> "Node":
        # tie (posterior exactly 0.5) predicts label 0
        label = 1 if dist.count1 > dist.count0 else 0
        return cls(
            kind=NodeKind.LEAF,
            diagnostics=diagnostics,
            leaf_label=label,
            leaf_posterior=dist.posterior,
        )


@dataclass(frozen=True)
class TrainConfig:
    """
    Hyperparameters for growing trees and forests

    Args:
        tau: divergence threshold (nats); nodes above it classify (H-nodes)
        delta: minimum information gain (nats) for an H-node to split
        max_depth: hard depth cap
        min_samples: nodes smaller than this become leaves
        pool: feature pool and threshold grid settings
        divergence: histogram/divergence estimator settings
        sampling: per-tree data sampling ("bootstrap", "subsample" or "none")
        subsample_fraction: fraction drawn without replacement for "subsample"
        divergence_test: False grows every node with train_rf_node, the
            reference Random Forest splitter that never estimates a divergence
    """
    tau: float = 0.5
    delta: float = 0.01
    max_depth: int = 64
    min_samples: int = 2
    pool: PoolConfig = field(default_factory=PoolConfig)
    divergence: DivergenceConfig = field(default_factory=DivergenceConfig)
    sampling: str = "bootstrap"
    subsample_fraction: float = 0.632
    divergence_test: bool = True

    def __post_init__(self):
        if not self.tau >= 0:
            raise InvalidInputError(f"tau must be nonnegative, got {self.tau}")
        if not self.delta >= 0:
            raise InvalidInputError(f"delta must be nonnegative, got {self.delta}")
        if self.max_depth < 1:
            raise InvalidInputError("max_depth must be at least 1")
        if self.min_samples < 1:
            raise InvalidInputError("min_samples must be at least 1")
        if self.sampling not in SAMPLING_MODES:
            raise InvalidInputError(f"sampling must be one of {SAMPLING_MODES}, got {self.sampling!r}")
        if not 0.0 < self.subsample_fraction <= 1.0:
            raise InvalidInputError("subsample_fraction must be in (0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainConfig":
        values = dict(data)
        values["pool"] = PoolConfig(**values.get("pool", {}))
        values["divergence"] = DivergenceConfig(**values.get("divergence", {}))
        return cls(**values)

    @classmethod
    def from_args(cls, args: Dict[str, Any]) -> "TrainConfig":
        """Build from the flat CLI/YAML argument names (see config.DEFAULT_TRAIN_ARGS)"""
        return cls(
            tau=float(args["tau"]),
            delta=float(args["delta"]),
            max_depth=int(args["max_depth"]),
            min_samples=int(args["min_samples"]),
            pool=PoolConfig(
                n_axis=int(args["n_axis"]),
                n_linear=int(args["n_linear"]),
                n_thresholds=int(args["n_thresholds"]),
                scope=str(args["pool_scope"]),
            ),
            divergence=DivergenceConfig(
                bins=int(args["bins"]),
                smoothing=float(args["smoothing"]),
                symmetrize=bool(args["symmetrize"]),
            ),
            sampling=str(args["sampling"]),
            subsample_fraction=float(args["subsample_fraction"]),
        )


@dataclass(frozen=True)
class Tree:
    root: Node
    dimension: int
    n_train_samples: int
    in_bag_fraction: float = 1.0


@dataclass(frozen=True)
class TreeStats:
    depth: int
    n_kl_nodes: int
    n_h_nodes: int
    n_leaves: int
    balance: float

    @property
    def n_internal(self) -> int:
        return self.n_kl_nodes + self.n_h_nodes


@dataclass(frozen=True)
class _SplitChoice:
    projection_index: int
    threshold: float
    score: float


def _best_entropy_split(values: np.ndarray, labels: np.ndarray,
                        grids: Sequence[np.ndarray]) -> Optional[_SplitChoice]:
    """argmin of weighted child entropy; ties keep the lowest projection, then threshold"""
    n = labels.size
    best: Optional[_SplitChoice] = None
    for j, thresholds in enumerate(grids):
        if thresholds.size == 0:
            continue
        column = values[:, j]
        ordered = np.sort(column)
        ones = np.sort(column[labels == 1])

        n_ge = n - np.searchsorted(ordered, thresholds, side="left")
        n1_ge = ones.size - np.searchsorted(ones, thresholds, side="left")
        n_lt = n - n_ge
        n1_lt = ones.size - n1_ge

        scores = n_ge / n * binary_entropy(n1_ge, n_ge) + n_lt / n * binary_entropy(n1_lt, n_lt)
        k = int(np.argmin(scores))
        if best is None or scores[k] < best.score:
            best = _SplitChoice(j, float(thresholds[k]), float(scores[k]))
    return best


def _best_kl_split(values: np.ndarray, labels: np.ndarray, grids: Sequence[np.ndarray],
                   cfg: DivergenceConfig) -> Optional[_SplitChoice]:
    """argmax of weighted child divergence over every (projection, threshold) candidate"""
    n = labels.size
    best: Optional[_SplitChoice] = None
    for j, thresholds in enumerate(grids):
        column = values[:, j]
        for threshold in thresholds:
            mask = column >= threshold
            n_ge = int(mask.sum())
            if n_ge == 0 or n_ge == n:
                continue

            score = 0.0
            for child_mask, size in ((mask, n_ge), (~mask, n - n_ge)):
                child_div = divergence_from_values(values[child_mask], labels[child_mask], cfg)
                if child_div is not None:
                    score += size / n * child_div

            if best is None or score > best.score:
                best = _SplitChoice(j, float(threshold), score)
    return best


def train_rf_node(dataset: Dataset, view: SampleView, cfg: TrainConfig, rng: np.random.Generator,
                  depth: int = 0, pool: Optional[FeaturePool] = None) -> Node:
    """
    Reference Random Forest splitter: entropy argmin at every node, leaf once
    the gain is <= delta. Never estimates a divergence.

    Draws from ``rng`` in the same order as train_node, so with tau = 0 both
    grow the same stumps.
    """
    if len(view) == 0:
        raise InvalidInputError("train_rf_node needs a nonempty view")

    labels = dataset.labels[view.indices]
    dist = LabelDistribution.from_labels(labels)
    n = len(view)
    if dist.is_pure or n < cfg.min_samples or depth >= cfg.max_depth:
        return Node.leaf(dist, NodeDiagnostics(n_samples=n))

    if pool is None or cfg.pool.scope == "node":
        pool = generate_pool(dataset.dimension, cfg.pool, rng)
    values = pool.project(dataset.features[view.indices])
    grids = [thresholds_from_values(values[:, j], cfg.pool.n_thresholds) for j in range(len(pool))]
    split = _best_entropy_split(values, labels, grids)
    if split is None:
        return Node.leaf(dist, NodeDiagnostics(n_samples=n))

    gain = entropy(dist) - split.score
    if gain <= cfg.delta:
        return Node.leaf(dist, NodeDiagnostics(n, split_score=split.score, gain=gain))

    mask = values[:, split.projection_index] >= split.threshold
    children = (
        train_rf_node(dataset, SampleView(view.indices[mask]), cfg, rng, depth + 1, pool),
        train_rf_node(dataset, SampleView(view.indices[~mask]), cfg, rng, depth + 1, pool),
    )
    return Node(
        kind=NodeKind.H_NODE,
        diagnostics=NodeDiagnostics(n, split_score=split.score, gain=gain),
        stump=Stump(pool.projections[split.projection_index], split.threshold),
        children=children,
    )


def train_node(dataset: Dataset, view: SampleView, cfg: TrainConfig, rng: np.random.Generator,
               depth: int = 0, pool: Optional[FeaturePool] = None) -> Node:
    """
    Grow the subtree for ``view`` at ``depth``

    Args:
        dataset: Shared training data
        view: Samples reaching this node (must be nonempty)
        cfg: Training hyperparameters
        rng: Generator stream owned by this tree; consumed depth-first
        depth: Depth of this node (root = 0)
        pool: Fixed pool for tree-scoped pools; None draws a fresh pool per node

    Returns:
        Root of the trained subtree
    """
    if not cfg.divergence_test:
        return train_rf_node(dataset, view, cfg, rng, depth, pool)
    if len(view) == 0:
        raise InvalidInputError("train_node needs a nonempty view")

    labels = dataset.labels[view.indices]
    dist = LabelDistribution.from_labels(labels)
    n = len(view)

    if dist.is_pure or n < cfg.min_samples or depth >= cfg.max_depth:
        return Node.leaf(dist, NodeDiagnostics(n_samples=n))

    if pool is None or cfg.pool.scope == "node":
        pool = generate_pool(dataset.dimension, cfg.pool, rng)
    values = pool.project(dataset.features[view.indices])
    grids = [thresholds_from_values(values[:, j], cfg.pool.n_thresholds) for j in range(len(pool))]
    if not any(grid.size for grid in grids):
        return Node.leaf(dist, NodeDiagnostics(n_samples=n))

    node_div = divergence_from_values(values, labels, cfg.divergence)
    classify = cfg.tau <= 0.0 or node_div > cfg.tau

    if classify:
        split = _best_entropy_split(values, labels, grids)
        gain = entropy(dist) - split.score
        if gain <= cfg.delta:
            logger.debug("depth %d: gain %.4f <= delta, leaf of %d samples", depth, gain, n)
            return Node.leaf(dist, NodeDiagnostics(n, node_div, split.score, gain))
        kind = NodeKind.H_NODE
    else:
        split = _best_kl_split(values, labels, grids, cfg.divergence)
        if split is None:
            return Node.leaf(dist, NodeDiagnostics(n_samples=n, divergence=node_div))
        gain = None
        kind = NodeKind.KL_NODE

    logger.debug("depth %d: %s-node on %d samples (divergence %.4f, score %.4f)",
                 depth, kind.value, n, node_div, split.score)

    mask = values[:, split.projection_index] >= split.threshold
    first = SampleView(view.indices[mask])
    second = SampleView(view.indices[~mask])
    children = (
        train_node(dataset, first, cfg, rng, depth + 1, pool),
        train_node(dataset, second, cfg, rng, depth + 1, pool),
    )
    return Node(
        kind=kind,
        diagnostics=NodeDiagnostics(n, node_div, split.score, gain),
        stump=Stump(pool.projections[split.projection_index], split.threshold),
        children=children,
    )


def train_tree(dataset: Dataset, cfg: TrainConfig, rng: np.random.Generator,
               view: Optional[SampleView] = None) -> Tree:
    """Train one tree on ``view`` (default: the whole dataset)"""
    view = dataset.full_view() if view is None else view
    pool = generate_pool(dataset.dimension, cfg.pool, rng) if cfg.pool.scope == "tree" else None
    root = train_node(dataset, view, cfg, rng, depth=0, pool=pool)
    return Tree(root=root, dimension=dataset.dimension, n_train_samples=len(view))


def iter_nodes(root: Node) -> Iterator[Tuple[Node, int]]:
    """Pre-order traversal yielding (node, depth); first child before second"""
    stack: List[Tuple[Node, int]] = [(root, 0)]
    while stack:
        node, depth = stack.pop()
        yield node, depth
        if not node.is_leaf:
            stack.append((node.children[1], depth + 1))
            stack.append((node.children[0], depth + 1))


def _root_of(tree: Union[Tree, Node]) -> Node:
    return tree.root if isinstance(tree, Tree) else tree


def _check_dimension(tree: Union[Tree, Node], dimension: int) -> None:
    if isinstance(tree, Tree):
        if dimension != tree.dimension:
            raise DimensionMismatchError(
                f"tree was trained on {tree.dimension} features, got {dimension}"
            )
        return
    # a bare node declares no dimension: every stump must accept the input
    for node, _ in iter_nodes(tree):
        if not node.is_leaf:
            node.stump.projection.check_dimension(dimension)


def predict_tree(tree: Union[Tree, Node], features: Sequence[float]) -> Tuple[int, float]:
    """Descend the stump cascade (>= goes to the first child); returns (label, posterior)"""
    vector = np.asarray(features, dtype=np.float64)
    if vector.ndim != 1:
        raise InvalidInputError("predict_tree expects a single feature vector")
    _check_dimension(tree, vector.size)

    row = vector.reshape(1, -1)
    node = _root_of(tree)
    while not node.is_leaf:
        value = node.stump.projection.project(row)[0]
        node = node.children[0] if value >= node.stump.threshold else node.children[1]
    return node.leaf_label, node.leaf_posterior


def _route(tree: Union[Tree, Node], features: np.ndarray) -> Tuple[np.ndarray, List[Node]]:
    """Leaf index (pre-order numbering) reached by every row, plus the leaf list"""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise InvalidInputError("expected an (n, k) feature matrix")
    _check_dimension(tree, features.shape[1])

    root = _root_of(tree)
    leaves: List[Node] = []
    leaf_ids: Dict[int, int] = {}
    for node, _ in iter_nodes(root):
        if node.is_leaf:
            leaf_ids[id(node)] = len(leaves)
            leaves.append(node)

    reached = np.full(features.shape[0], -1, dtype=np.int64)
    stack = [(root, np.arange(features.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if rows.size == 0:
            continue
        if node.is_leaf:
            reached[rows] = leaf_ids[id(node)]
            continue
        mask = node.stump.projection.project(features[rows]) >= node.stump.threshold
        stack.append((node.children[1], rows[~mask]))
        stack.append((node.children[0], rows[mask]))
    return reached, leaves


def apply_tree(tree: Union[Tree, Node], features: np.ndarray) -> np.ndarray:
    """
    Index of the leaf each row lands in (leaves numbered in pre-order)

    Rows sharing a leaf form one of the subsets the tree carved out of the data.
    """
    reached, _ = _route(tree, features)
    return reached


def predict_tree_batch(tree: Union[Tree, Node], features: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized predict_tree: (labels, posteriors) for every row"""
    reached, leaves = _route(tree, features)
    labels = np.array([leaf.leaf_label for leaf in leaves], dtype=np.int8)[reached]
    posteriors = np.array([leaf.leaf_posterior for leaf in leaves], dtype=np.float64)[reached]
    return labels, posteriors


def tree_stats(tree: Union[Tree, Node]) -> TreeStats:
    """Depth, node-kind counts and worst-case child balance of a tree"""
    depth = 0
    counts = {kind: 0 for kind in NodeKind}
    balance = 1.0
    for node, node_depth in iter_nodes(_root_of(tree)):
        counts[node.kind] += 1
        depth = max(depth, node_depth)
        if not node.is_leaf and node.diagnostics.n_samples > 0:
            smaller = min(child.diagnostics.n_samples for child in node.children)
            balance = min(balance, 2.0 * smaller / node.diagnostics.n_samples)
    return TreeStats(
        depth=depth,
        n_kl_nodes=counts[NodeKind.KL_NODE],
        n_h_nodes=counts[NodeKind.H_NODE],
        n_leaves=counts[NodeKind.LEAF],
        balance=balance,
    )
