"""
Benchmark harness comparing Information Forests with the reference Random Forest

stripes-depth: tree depth / balance on alternating stripes as the number of
groups grows. hidden-parts: accuracy when the classes only differ within parts.
Both emit one report row per (method, size, repeat).
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .bench_config import REPORT_COLUMNS, TEST_SEED_OFFSET
from .core_model import Dataset
from .datagen import HiddenPartsSpec, StripesSpec, gen_hidden_parts, gen_stripes
from .forest import Forest, accuracy, train_forest
from .tree import TrainConfig

logger = logging.getLogger(__name__)

METHOD_RF = "RF"
METHOD_IF = "IF"


def _single_tree_sampling(cfg: TrainConfig, n_trees: int) -> TrainConfig:
    """A lone tree sees the whole dataset; ensembles keep the configured sampling"""
    return replace(cfg, sampling="none") if n_trees == 1 else cfg


def report_row(method: str, size: int, repeat: int, seed: int, forest: Forest,
               train: Dataset, test: Dataset) -> Dict[str, object]:
    stats = forest.stats()
    return {
        "method": method,
        "n_groups": size,
        "repeat": repeat,
        "seed": seed,
        "mean_depth": float(np.mean([s.depth for s in stats])),
        "max_depth": max(s.depth for s in stats),
        "mean_balance": float(np.mean([s.balance for s in stats])),
        "kl_nodes": sum(s.n_kl_nodes for s in stats),
        "h_nodes": sum(s.n_h_nodes for s in stats),
        "leaves": sum(s.n_leaves for s in stats),
        "train_acc": accuracy(forest, train),
        "test_acc": accuracy(forest, test),
    }


def _stripes(n_groups: int, per_group: int, seed: int) -> Tuple[Dataset, Dataset]:
    train = gen_stripes(StripesSpec(n_groups=n_groups, per_group=per_group, seed=seed))
    test = gen_stripes(StripesSpec(n_groups=n_groups, per_group=per_group, seed=seed + TEST_SEED_OFFSET))
    return train, test


def tune_tau(n_groups: int, per_group: int, n_trees: int, repeats: int, base_config: TrainConfig,
             tau_grid: Sequence[float], seed: int, n_jobs: Optional[int] = None) -> float:
    """
    Pick the tau from ``tau_grid`` giving the smallest mean tree depth on
    stripes with ``n_groups`` groups; ties go to the smaller tau
    """
    best_tau, best_depth = None, None
    for tau in sorted(tau_grid):
        cfg = replace(base_config, tau=tau)
        depths = []
        for repeat in range(repeats):
            run_seed = seed + repeat
            train, _ = _stripes(n_groups, per_group, run_seed)
            forest = train_forest(train, cfg, n_trees, run_seed, n_jobs=n_jobs)
            depths.append(np.mean([s.depth for s in forest.stats()]))
        mean_depth = float(np.mean(depths))
        logger.info(f"  tau={tau}: mean depth {mean_depth:.2f} at n_groups={n_groups}")
        if best_depth is None or mean_depth < best_depth:
            best_tau, best_depth = tau, mean_depth
    return best_tau


def run_stripes_depth(n_groups_list: Sequence[int], n_trees: int, repeats: int,
                      base_config: TrainConfig, tau_grid: Sequence[float], per_group: int = 100,
                      seed: int = 0, n_jobs: Optional[int] = None,
                      progress: bool = False) -> Tuple[pd.DataFrame, float]:
    """
    RF vs IF tree structure on alternating stripes

    Returns:
        (report with one row per method x n_groups x repeat, tau chosen for IF)
    """
    logger.info("=" * 70)
    logger.info("BENCHMARK - STRIPES DEPTH")
    logger.info("=" * 70)

    cfg = _single_tree_sampling(base_config, n_trees)
    rf_config = replace(cfg, divergence_test=False)

    chosen_tau = tune_tau(max(n_groups_list), per_group, n_trees, repeats, cfg, tau_grid, seed, n_jobs)
    if_config = replace(cfg, tau=chosen_tau)
    logger.info(f"[OK] IF tau tuned on n_groups={max(n_groups_list)}: {chosen_tau}")

    rows: List[Dict[str, object]] = []
    runs = [(n, r) for n in n_groups_list for r in range(repeats)]
    for n_groups, repeat in tqdm(runs, desc="stripes", disable=not progress):
        run_seed = seed + repeat
        train, test = _stripes(n_groups, per_group, run_seed)
        for method, method_cfg in ((METHOD_RF, rf_config), (METHOD_IF, if_config)):
            forest = train_forest(train, method_cfg, n_trees, run_seed, n_jobs=n_jobs)
            rows.append(report_row(method, n_groups, repeat, run_seed, forest, train, test))

    report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    summary = report.groupby(["method", "n_groups"])["mean_depth"].mean()
    for (method, n_groups), depth in summary.items():
        logger.info(f"  {method} n_groups={n_groups}: mean depth {depth:.2f}")
    logger.info("=" * 70)
    return report, chosen_tau


def run_hidden_parts(n_parts: int, per_part: int, separation: float, noise: float, n_trees: int,
                     repeats: int, base_config: TrainConfig, tau: float, seed: int = 0,
                     n_jobs: Optional[int] = None, progress: bool = False) -> pd.DataFrame:
    """RF vs IF accuracy when the measurement only separates the classes within parts"""
    logger.info("=" * 70)
    logger.info("BENCHMARK - HIDDEN PARTS")
    logger.info("=" * 70)

    cfg = _single_tree_sampling(base_config, n_trees)
    rows: List[Dict[str, object]] = []
    for repeat in tqdm(range(repeats), desc="hidden-parts", disable=not progress):
        run_seed = seed + repeat
        spec = HiddenPartsSpec(n_parts=n_parts, per_part=per_part, separation=separation,
                               noise=noise, seed=run_seed)
        train = gen_hidden_parts(spec)
        test = gen_hidden_parts(replace(spec, seed=run_seed + TEST_SEED_OFFSET))
        for method, method_cfg in ((METHOD_RF, replace(cfg, divergence_test=False)),
                                   (METHOD_IF, replace(cfg, tau=tau))):
            forest = train_forest(train, method_cfg, n_trees, run_seed, n_jobs=n_jobs)
            rows.append(report_row(method, n_parts, repeat, run_seed, forest, train, test))

    report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    for method, acc in report.groupby("method")["test_acc"].mean().items():
        logger.info(f"  {method}: mean held-out accuracy {acc:.3f}")
    logger.info("=" * 70)
    return report
