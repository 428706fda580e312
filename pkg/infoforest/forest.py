"""
Forest training (bagging + per-tree generator streams), majority-vote
prediction, out-of-bag error and the JSON model format
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from . import config
from .core_model import AxisProjection, Dataset, LinearProjection, Projection, Stump
from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    ModelDimensionError,
    ModelFormatError,
    ModelVersionError,
    SingleClassError,
)
from .tree import (
    Node,
    NodeDiagnostics,
    NodeKind,
    TrainConfig,
    Tree,
    TreeStats,
    predict_tree,
    predict_tree_batch,
    apply_tree,
    train_tree,
    tree_stats,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Forest:
    trees: Tuple[Tree, ...]
    config: TrainConfig
    n_trees: int
    dimension: int
    seed: int
    format_version: int = FORMAT_VERSION
    oob_error: Optional[float] = None

    def __post_init__(self):
        if self.n_trees < 1 or len(self.trees) != self.n_trees:
            raise InvalidInputError(
                f"forest declares {self.n_trees} trees but holds {len(self.trees)}"
            )
        for tree in self.trees:
            if tree.dimension != self.dimension:
                raise DimensionMismatchError(
                    f"tree trained on {tree.dimension} features in a {self.dimension}-D forest"
                )

    def stats(self) -> List[TreeStats]:
        return [tree_stats(tree) for tree in self.trees]


@dataclass(frozen=True)
class Prediction:
    label: int
    vote_fraction: float
    mean_posterior: float


# ---------------------------------------------
# Training
# ---------------------------------------------

def tree_streams(seed: int, tree_index: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (sampling, growing) generators for one tree, fixed by (seed, tree_index)"""
    sampling_seq, growing_seq = np.random.SeedSequence([seed, tree_index]).spawn(2)
    return np.random.default_rng(sampling_seq), np.random.default_rng(growing_seq)


def draw_sample(n_samples: int, cfg: TrainConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Row indices a tree trains on

    bootstrap: n_samples draws with replacement; subsample: a fraction without
    replacement (sorted); none: every row once.
    """
    if cfg.sampling == "bootstrap":
        return rng.integers(0, n_samples, size=n_samples)
    if cfg.sampling == "subsample":
        size = max(1, int(round(cfg.subsample_fraction * n_samples)))
        return np.sort(rng.choice(n_samples, size=size, replace=False))
    return np.arange(n_samples)


def _train_one(dataset: Dataset, cfg: TrainConfig, seed: int, tree_index: int) -> Tuple[Tree, np.ndarray]:
    sampling_rng, growing_rng = tree_streams(seed, tree_index)
    bag = draw_sample(dataset.n_samples, cfg, sampling_rng)
    tree = train_tree(dataset.take(bag), cfg, growing_rng)
    in_bag_fraction = np.unique(bag).size / dataset.n_samples
    tree = Tree(
        root=tree.root,
        dimension=tree.dimension,
        n_train_samples=tree.n_train_samples,
        in_bag_fraction=in_bag_fraction,
    )
    return tree, bag


def _oob_error(dataset: Dataset, trees: Sequence[Tree], bags: Sequence[np.ndarray]) -> Optional[float]:
    """Majority-vote error over samples left out of at least one tree's bag"""
    votes = np.zeros(dataset.n_samples, dtype=np.int64)
    voters = np.zeros(dataset.n_samples, dtype=np.int64)
    for tree, bag in zip(trees, bags):
        out_of_bag = np.ones(dataset.n_samples, dtype=bool)
        out_of_bag[bag] = False
        if not out_of_bag.any():
            continue
        labels, _ = predict_tree_batch(tree, dataset.features[out_of_bag])
        votes[out_of_bag] += labels
        voters[out_of_bag] += 1

    covered = voters > 0
    if not covered.any():
        return None
    predicted = (2 * votes[covered] > voters[covered]).astype(np.int8)
    return float(np.mean(predicted != dataset.labels[covered]))


def train_forest(dataset: Dataset, cfg: TrainConfig, n_trees: int, seed: int,
                 n_jobs: Optional[int] = None, progress: bool = False) -> Forest:
    """
    Train ``n_trees`` trees, each on its own sample drawn from stream (seed, t)

    Args:
        dataset: Training data with both classes present
        cfg: Training hyperparameters
        n_trees: Number of trees
        seed: Forest seed; together with the tree index it fixes every tree
        n_jobs: Worker processes (default config.N_JOBS); results never depend on it
        progress: Show a tqdm progress bar

    Returns:
        The trained Forest
    """
    if n_trees < 1:
        raise InvalidInputError(f"n_trees must be at least 1, got {n_trees}")
    if not dataset.has_both_classes():
        raise SingleClassError("training data must contain samples of both classes")

    n_jobs = config.N_JOBS if n_jobs is None else n_jobs
    logger.info(f"Training {n_trees} trees on {dataset.n_samples:,} samples "
                f"(tau={cfg.tau}, delta={cfg.delta}, jobs={n_jobs})")

    indices = range(n_trees)
    if n_jobs > 1 and n_trees > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as executor:
            jobs = executor.map(_train_one, [dataset] * n_trees, [cfg] * n_trees,
                                [seed] * n_trees, indices)
            results = list(tqdm(jobs, total=n_trees, desc="trees", disable=not progress))
    else:
        results = [_train_one(dataset, cfg, seed, t)
                   for t in tqdm(indices, desc="trees", disable=not progress)]

    trees = tuple(tree for tree, _ in results)
    oob_error = None
    if cfg.sampling != "none":
        oob_error = _oob_error(dataset, trees, [bag for _, bag in results])

    forest = Forest(
        trees=trees,
        config=cfg,
        n_trees=n_trees,
        dimension=dataset.dimension,
        seed=seed,
        oob_error=oob_error,
    )
    logger.info(f"[OK] Forest trained: {n_trees} trees, OOB error {oob_error}")
    return forest


# ---------------------------------------------
# Prediction
# ---------------------------------------------

def _vote(n_votes: int, n_trees: int) -> int:
    # a tie predicts 0
    return 1 if 2 * n_votes > n_trees else 0


def predict(forest: Forest, features: Sequence[float]) -> Prediction:
    """Unweighted majority vote over tree labels"""
    vector = np.asarray(features, dtype=np.float64)
    if vector.ndim != 1 or vector.size != forest.dimension:
        raise DimensionMismatchError(
            f"model expects {forest.dimension} features, got {vector.size}"
        )
    outputs = [predict_tree(tree, vector) for tree in forest.trees]
    n_votes = sum(label for label, _ in outputs)
    return Prediction(
        label=_vote(n_votes, forest.n_trees),
        vote_fraction=n_votes / forest.n_trees,
        mean_posterior=sum(posterior for _, posterior in outputs) / forest.n_trees,
    )


def predict_batch(forest: Forest, features: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized predict over an (n, k) matrix

    Returns:
        (labels, vote_fractions, mean_posteriors), each of length n
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != forest.dimension:
        raise DimensionMismatchError(
            f"model expects {forest.dimension} features, got shape {features.shape}"
        )
    votes = np.zeros(features.shape[0], dtype=np.int64)
    posterior_sum = np.zeros(features.shape[0], dtype=np.float64)
    for tree in forest.trees:
        labels, posteriors = predict_tree_batch(tree, features)
        votes += labels
        posterior_sum += posteriors
    predicted = (2 * votes > forest.n_trees).astype(np.int8)
    return predicted, votes / forest.n_trees, posterior_sum / forest.n_trees


def apply(forest: Forest, features: np.ndarray) -> np.ndarray:
    """(n, n_trees) matrix of leaf indices, one column per tree"""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != forest.dimension:
        raise DimensionMismatchError(
            f"model expects {forest.dimension} features, got shape {features.shape}"
        )
    return np.column_stack([apply_tree(tree, features) for tree in forest.trees])


def accuracy(forest: Forest, dataset: Dataset) -> float:
    labels, _, _ = predict_batch(forest, dataset.features)
    return float(np.mean(labels == dataset.labels))


# ---------------------------------------------
# Serialization
# ---------------------------------------------

def _projection_to_dict(projection: Projection) -> Dict[str, Any]:
    if isinstance(projection, AxisProjection):
        return {"type": "axis", "index": projection.index}
    return {"type": "linear", "weights": list(projection.weights)}


def _projection_from_dict(data: Dict[str, Any], dimension: int) -> Projection:
    kind = data["type"]
    if kind == "axis":
        projection: Projection = AxisProjection(int(data["index"]))
    elif kind == "linear":
        projection = LinearProjection(tuple(float(w) for w in data["weights"]))
    else:
        raise ModelFormatError(f"unknown projection type {kind!r}")
    try:
        projection.check_dimension(dimension)
    except DimensionMismatchError as e:
        raise ModelDimensionError(str(e)) from e
    return projection


def node_to_dict(node: Node) -> Dict[str, Any]:
    record: Dict[str, Any] = {"kind": node.kind.value}
    if node.is_leaf:
        record["leaf_label"] = node.leaf_label
        record["leaf_posterior"] = node.leaf_posterior
    else:
        record["projection"] = _projection_to_dict(node.stump.projection)
        record["threshold"] = node.stump.threshold
        record["children"] = [node_to_dict(child) for child in node.children]
    diag = node.diagnostics
    record["diagnostics"] = {
        "n_samples": diag.n_samples,
        "divergence": diag.divergence,
        "split_score": diag.split_score,
        "gain": diag.gain,
    }
    return record


def node_from_dict(data: Dict[str, Any], dimension: int) -> Node:
    diag = data["diagnostics"]
    diagnostics = NodeDiagnostics(
        n_samples=int(diag["n_samples"]),
        divergence=diag["divergence"],
        split_score=diag["split_score"],
        gain=diag["gain"],
    )
    kind = NodeKind(data["kind"])
    if kind is NodeKind.LEAF:
        return Node(
            kind=kind,
            diagnostics=diagnostics,
            leaf_label=int(data["leaf_label"]),
            leaf_posterior=float(data["leaf_posterior"]),
        )
    children = data["children"]
    if len(children) != 2:
        raise ModelFormatError("internal node must have exactly two children")
    return Node(
        kind=kind,
        diagnostics=diagnostics,
        stump=Stump(_projection_from_dict(data["projection"], dimension), float(data["threshold"])),
        children=(node_from_dict(children[0], dimension), node_from_dict(children[1], dimension)),
    )


def tree_to_dict(tree: Tree) -> Dict[str, Any]:
    return {
        "dimension": tree.dimension,
        "n_train_samples": tree.n_train_samples,
        "in_bag_fraction": tree.in_bag_fraction,
        "root": node_to_dict(tree.root),
    }


def serialize(forest: Forest) -> bytes:
    """JSON document; floats use Python's shortest round-trip repr"""
    document = {
        "format_version": forest.format_version,
        "dimension": forest.dimension,
        "n_trees": forest.n_trees,
        "seed": forest.seed,
        "config": forest.config.to_dict(),
        "oob_error": forest.oob_error,
        "trees": [tree_to_dict(tree) for tree in forest.trees],
    }
    return json.dumps(document, indent=1).encode("utf-8")


def deserialize(stream: bytes) -> Forest:
    """
    Parse a model document

    Raises:
        ModelFormatError: empty, invalid JSON or missing fields
        ModelVersionError: format_version differs from FORMAT_VERSION
        ModelDimensionError: trees or projections disagree with the declared dimension
    """
    if not stream or not stream.strip():
        raise ModelFormatError("empty model document")
    try:
        document = json.loads(stream)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ModelFormatError(f"model document is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ModelFormatError("model document must be a JSON object")

    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"model format_version {version} != supported {FORMAT_VERSION}")

    try:
        dimension = int(document["dimension"])
        n_trees = int(document["n_trees"])
        trees = []
        for record in document["trees"]:
            if int(record["dimension"]) != dimension:
                raise ModelDimensionError(
                    f"tree dimension {record['dimension']} != model dimension {dimension}"
                )
            trees.append(Tree(
                root=node_from_dict(record["root"], dimension),
                dimension=dimension,
                n_train_samples=int(record["n_train_samples"]),
                in_bag_fraction=float(record["in_bag_fraction"]),
            ))
        if len(trees) != n_trees:
            raise ModelFormatError(f"model declares {n_trees} trees but contains {len(trees)}")
        return Forest(
            trees=tuple(trees),
            config=TrainConfig.from_dict(document["config"]),
            n_trees=n_trees,
            dimension=dimension,
            seed=int(document["seed"]),
            format_version=version,
            oob_error=document.get("oob_error"),
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"malformed model document: {e}") from e


def save_forest(forest: Forest, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(serialize(forest))
    logger.info(f"[OK] Model saved → {path}")
    return path


def load_forest(path: Path) -> Forest:
    return deserialize(Path(path).read_bytes())
