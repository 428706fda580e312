"""
Information Forests: randomized binary trees that regroup data with KL-nodes
until the classes are separable enough, then classify with entropy splits
"""

from .core_model import (
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
from .divergence import (
    DivergenceConfig,
    Histogram,
    build_histogram,
    divergence,
    entropy,
    kl,
    node_divergence,
    score_entropy_split,
    score_kl_split,
)
from .forest import (
    Forest,
    Prediction,
    apply,
    deserialize,
    load_forest,
    predict,
    predict_batch,
    save_forest,
    serialize,
    train_forest,
)
from .stumps import FeaturePool, PoolConfig, candidate_thresholds, generate_pool
from .tree import (
    Node,
    NodeKind,
    TrainConfig,
    Tree,
    TreeStats,
    apply_tree,
    predict_tree,
    train_node,
    train_tree,
    tree_stats,
)

__version__ = "0.1.0"
