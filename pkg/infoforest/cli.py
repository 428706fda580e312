"""
Information Forest command-line interface

Commands:
    gen      write a synthetic dataset (stripes | parts | blobs) as CSV
    train    train a forest from a CSV dataset and save the JSON model
    predict  predict a CSV with a saved model
    bench    IF vs RF benchmark report (stripes-depth | hidden-parts)
    inspect  print per-tree structure statistics of a saved model

Exit codes: 0 ok, 2 usage, 3 I/O, 4 malformed data, 5 non-finite features,
6 single-class data, 7 model compatibility.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from . import config
from .bench import run_hidden_parts, run_stripes_depth
from .bench_config import BENCH_DEFAULTS, EXPERIMENTS
from .datagen import HiddenPartsSpec, StripesSpec, gen_blobs, gen_hidden_parts, gen_stripes
from .dataset_io import (
    dataset_fingerprint,
    fingerprint_arrays,
    read_dataset_csv,
    read_feature_table,
    write_dataset_csv,
)
from .errors import EXIT_IO, EXIT_OK, InfoForestError
from .forest import load_forest, predict_batch, save_forest, train_forest
from .manifest import ManifestTracker
from .tree import TrainConfig, tree_stats

logger = logging.getLogger(__name__)


# =====================================================
# Command handlers
# =====================================================

def cmd_gen(args: argparse.Namespace, tracker: ManifestTracker) -> Dict[str, Any]:
    """Generate a synthetic dataset and write it as CSV"""
    if args.kind == "stripes":
        spec = StripesSpec(n_groups=args.n_groups, per_group=args.per_group,
                           jitter=args.jitter, seed=args.seed)
        dataset = gen_stripes(spec)
        spec_args = vars(spec)
    elif args.kind == "parts":
        spec = HiddenPartsSpec(n_parts=args.n_parts, per_part=args.per_part,
                               separation=args.separation, noise=args.noise, seed=args.seed)
        dataset = gen_hidden_parts(spec)
        spec_args = vars(spec)
    else:
        dataset = gen_blobs(args.n_per_class, args.mean_shift, args.seed)
        spec_args = {"n_per_class": args.n_per_class, "mean_shift": args.mean_shift, "seed": args.seed}

    tracker.update(config={"kind": args.kind, **spec_args}, seed=args.seed,
                   dataset_fingerprint=dataset_fingerprint(dataset))
    write_dataset_csv(dataset, args.out)

    n_positive = int(dataset.labels.sum())
    n_negative = dataset.n_samples - n_positive
    print(f"Wrote {dataset.n_samples} samples to {args.out}")
    print(f"Class balance: label 1 = {n_positive}, label 0 = {n_negative}")
    return {"n_samples": dataset.n_samples, "n_label1": n_positive, "n_label0": n_negative}


def _train_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    names = ["tau", "delta", "trees", "max_depth", "min_samples", "n_axis", "n_linear",
             "n_thresholds", "pool_scope", "bins", "smoothing", "symmetrize", "sampling",
             "subsample_fraction", "seed"]
    return {name: getattr(args, name, None) for name in names}


def cmd_train(args: argparse.Namespace, tracker: ManifestTracker) -> Dict[str, Any]:
    """Train a forest and save the model"""
    resolved = config.resolve_train_args(_train_overrides(args), args.config)
    cfg = TrainConfig.from_args(resolved)
    tracker.update(config=resolved, seed=int(resolved["seed"]))

    dataset = read_dataset_csv(args.data)
    tracker.update(dataset_fingerprint=dataset_fingerprint(dataset))

    forest = train_forest(dataset, cfg, int(resolved["trees"]), int(resolved["seed"]),
                          n_jobs=args.jobs, progress=not args.quiet)
    save_forest(forest, args.out)

    stats = forest.stats()
    labels, _, _ = predict_batch(forest, dataset.features)
    metrics = {
        "n_trees": forest.n_trees,
        "n_kl_nodes": sum(s.n_kl_nodes for s in stats),
        "n_h_nodes": sum(s.n_h_nodes for s in stats),
        "n_leaves": sum(s.n_leaves for s in stats),
        "mean_depth": float(np.mean([s.depth for s in stats])),
        "max_depth": max(s.depth for s in stats),
        "train_accuracy": float(np.mean(labels == dataset.labels)),
        "oob_error": forest.oob_error,
        "model_path": str(args.out),
    }
    print(f"Trained {forest.n_trees} trees → {args.out}")
    print(f"KL nodes: {metrics['n_kl_nodes']}  H nodes: {metrics['n_h_nodes']}  "
          f"leaves: {metrics['n_leaves']}")
    print(f"Training accuracy: {metrics['train_accuracy']:.4f}")
    return metrics


def cmd_predict(args: argparse.Namespace, tracker: ManifestTracker) -> Dict[str, Any]:
    """Predict every row of a CSV; report accuracy when labels are present"""
    forest = load_forest(args.model)
    features, labels = read_feature_table(args.data, forest.dimension)
    tracker.update(config={"model": str(args.model), "format_version": forest.format_version},
                   seed=forest.seed, dataset_fingerprint=fingerprint_arrays(features, labels))

    predicted, vote_fraction, mean_posterior = predict_batch(forest, features)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({
        "predicted_label": predicted.astype(int),
        "vote_fraction": vote_fraction,
        "mean_posterior": mean_posterior,
    }).to_csv(out, index=False)
    print(f"Wrote {len(predicted)} predictions to {out}")

    metrics: Dict[str, Any] = {"n_samples": int(len(predicted)), "predictions_path": str(out)}
    if labels is not None:
        metrics["accuracy"] = float(np.mean(predicted == labels))
        print(f"Accuracy: {metrics['accuracy']:.4f}")
    return metrics


def _parse_int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def cmd_bench(args: argparse.Namespace, tracker: ManifestTracker) -> Dict[str, Any]:
    """Run a benchmark experiment and write the CSV report"""
    preset = BENCH_DEFAULTS["stripes_args"] if args.experiment == "stripes-depth" else None
    resolved = config.resolve_train_args(_train_overrides(args), args.config, preset=preset)
    base_config = TrainConfig.from_args(resolved)
    seed = int(resolved["seed"])
    n_trees = args.trees

    bench_args = {"experiment": args.experiment, "trees": n_trees, "repeats": args.repeats}
    metrics: Dict[str, Any] = {}
    if args.experiment == "stripes-depth":
        bench_args.update(n_groups_list=args.n_groups_list, per_group=args.per_group,
                          tau_grid=args.tau_grid)
        report, chosen_tau = run_stripes_depth(
            args.n_groups_list, n_trees, args.repeats, base_config, args.tau_grid,
            per_group=args.per_group, seed=seed, n_jobs=args.jobs, progress=not args.quiet,
        )
        metrics["chosen_tau"] = chosen_tau
        print(f"IF tau chosen from {args.tau_grid}: {chosen_tau}")
    else:
        bench_args.update(n_parts=args.n_parts, per_part=args.per_part,
                          separation=args.separation, noise=args.noise)
        report = run_hidden_parts(
            args.n_parts, args.per_part, args.separation, args.noise, n_trees, args.repeats,
            base_config, float(resolved["tau"]), seed=seed, n_jobs=args.jobs,
            progress=not args.quiet,
        )
    tracker.update(config={**resolved, **bench_args}, seed=seed)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    report.to_csv(out, index=False)
    print(f"Wrote {len(report)} report rows to {out}")

    summary = report.groupby(["method", "n_groups"])[["mean_depth", "test_acc"]].mean()
    print(summary.to_string())
    metrics["n_rows"] = int(len(report))
    metrics["summary"] = {
        f"{method}/{size}": {"mean_depth": float(row.mean_depth), "test_acc": float(row.test_acc)}
        for (method, size), row in summary.iterrows()
    }
    return metrics


def cmd_inspect(args: argparse.Namespace, tracker: ManifestTracker) -> Dict[str, Any]:
    """Print config echo, per-tree statistics and a depth histogram"""
    forest = load_forest(args.model)
    tracker.update(config={"model": str(args.model)}, seed=forest.seed)

    per_tree = pd.DataFrame([
        {
            "tree": t,
            "depth": s.depth,
            "kl_nodes": s.n_kl_nodes,
            "h_nodes": s.n_h_nodes,
            "internal": s.n_internal,
            "leaves": s.n_leaves,
            "balance": s.balance,
            "in_bag_fraction": tree.in_bag_fraction,
        }
        for t, (tree, s) in enumerate((tree, tree_stats(tree)) for tree in forest.trees)
    ])

    if args.format == "csv":
        print(per_tree.to_csv(index=False), end="")
    else:
        print("Config:")
        print(json.dumps(forest.config.to_dict(), indent=2))
        print(f"Trees: {forest.n_trees}  dimension: {forest.dimension}  seed: {forest.seed}")
        print(per_tree.to_string(index=False))
        print("Depth histogram:")
        for depth, count in per_tree["depth"].value_counts().sort_index().items():
            print(f"  depth {depth}: {count}")
        print(f"KL nodes: {int(per_tree['kl_nodes'].sum())}")
        print(f"H nodes: {int(per_tree['h_nodes'].sum())}")
        print(f"Leaves: {int(per_tree['leaves'].sum())}")
        print(f"OOB error: {forest.oob_error}")

    return {
        "n_trees": forest.n_trees,
        "n_kl_nodes": int(per_tree["kl_nodes"].sum()),
        "n_h_nodes": int(per_tree["h_nodes"].sum()),
        "n_leaves": int(per_tree["leaves"].sum()),
        "max_depth": int(per_tree["depth"].max()),
    }


# =====================================================
# Argument parsing
# =====================================================

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--manifest', type=Path, help='Manifest path (default: next to --out, else logs/manifests/)')
    parser.add_argument('--log-level', type=str, default=None, help='Logging level (default: LOG_LEVEL env)')
    parser.add_argument('--log-file', action='store_true', help='Also log to logs/infoforest.log')
    parser.add_argument('--quiet', action='store_true', help='Disable progress bars')


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    defaults = config.DEFAULT_TRAIN_ARGS
    parser.add_argument('--config', type=Path, help='YAML file of hyperparameter overrides')
    parser.add_argument('--tau', type=float, help=f"Divergence threshold in nats (default {defaults['tau']})")
    parser.add_argument('--delta', type=float, help=f"Minimum information gain in nats (default {defaults['delta']})")
    parser.add_argument('--max-depth', type=int, help=f"Depth cap (default {defaults['max_depth']})")
    parser.add_argument('--min-samples', type=int, help=f"Smallest splittable node (default {defaults['min_samples']})")
    parser.add_argument('--n-axis', type=int, help=f"Axis projections per pool (default {defaults['n_axis']})")
    parser.add_argument('--n-linear', type=int, help=f"Random linear projections per pool (default {defaults['n_linear']})")
    parser.add_argument('--n-thresholds', type=int, help=f"Thresholds per projection (default {defaults['n_thresholds']})")
    parser.add_argument('--pool-scope', choices=['node', 'tree'], help='Redraw the feature pool per node or per tree')
    parser.add_argument('--bins', type=int, help=f"Histogram bins (default {defaults['bins']})")
    parser.add_argument('--smoothing', type=float, help=f"Pseudo-count per bin (default {defaults['smoothing']})")
    parser.add_argument('--symmetrize', action='store_true', default=None, help='Use the symmetrized (Jeffreys) divergence')
    parser.add_argument('--sampling', choices=['bootstrap', 'subsample', 'none'], help='Per-tree data sampling')
    parser.add_argument('--subsample-fraction', type=float, help='Fraction kept by --sampling subsample')
    parser.add_argument('--seed', type=int, help=f"Random seed (default {defaults['seed']})")
    parser.add_argument('--jobs', type=int, default=None, help='Worker processes (default: INFOFOREST_N_JOBS)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='infoforest', description='Information Forests and Random Forest baseline')
    commands = parser.add_subparsers(dest='command', required=True)

    # gen
    gen = commands.add_parser('gen', help='Generate a synthetic dataset')
    kinds = gen.add_subparsers(dest='kind', required=True)

    stripes = kinds.add_parser('stripes', help='Alternating stripes')
    stripes.add_argument('--n-groups', type=int, default=8)
    stripes.add_argument('--per-group', type=int, default=50)
    stripes.add_argument('--jitter', type=float, default=0.0)

    parts = kinds.add_parser('parts', help='Hidden parts (classes differ only within parts)')
    parts.add_argument('--n-parts', type=int, default=BENCH_DEFAULTS['n_parts'])
    parts.add_argument('--per-part', type=int, default=BENCH_DEFAULTS['per_part'])
    parts.add_argument('--separation', type=float, default=BENCH_DEFAULTS['separation'])
    parts.add_argument('--noise', type=float, default=0.0)

    blobs = kinds.add_parser('blobs', help='Two Gaussian blobs')
    blobs.add_argument('--n-per-class', type=int, default=500)
    blobs.add_argument('--mean-shift', type=float, default=3.0)

    for sub in (stripes, parts, blobs):
        sub.add_argument('--seed', type=int, default=0)
        sub.add_argument('--out', type=Path, required=True, help='Output CSV path')
        _add_common(sub)
        sub.set_defaults(handler=cmd_gen)

    # train
    train = commands.add_parser('train', help='Train a forest')
    train.add_argument('--data', type=Path, required=True, help='Training CSV')
    train.add_argument('--trees', type=int, help=f"Number of trees (default {config.DEFAULT_TRAIN_ARGS['trees']})")
    train.add_argument('--out', type=Path, required=True, help='Model output path (JSON)')
    _add_train_flags(train)
    _add_common(train)
    train.set_defaults(handler=cmd_train)

    # predict
    predict = commands.add_parser('predict', help='Predict with a saved model')
    predict.add_argument('--model', type=Path, required=True)
    predict.add_argument('--data', type=Path, required=True)
    predict.add_argument('--out', type=Path, required=True, help='Predictions CSV path')
    _add_common(predict)
    predict.set_defaults(handler=cmd_predict)

    # bench
    bench = commands.add_parser('bench', help='IF vs RF benchmark')
    bench.add_argument('--experiment', choices=EXPERIMENTS, default='stripes-depth')
    bench.add_argument('--n-groups-list', type=_parse_int_list, default=list(BENCH_DEFAULTS['n_groups_list']))
    bench.add_argument('--per-group', type=int, default=BENCH_DEFAULTS['per_group'])
    bench.add_argument('--tau-grid', type=_parse_float_list, default=list(BENCH_DEFAULTS['tau_grid']))
    bench.add_argument('--n-parts', type=int, default=BENCH_DEFAULTS['n_parts'])
    bench.add_argument('--per-part', type=int, default=BENCH_DEFAULTS['per_part'])
    bench.add_argument('--separation', type=float, default=BENCH_DEFAULTS['separation'])
    bench.add_argument('--noise', type=float, default=BENCH_DEFAULTS['noise'])
    bench.add_argument('--trees', type=int, default=BENCH_DEFAULTS['trees'])
    bench.add_argument('--repeats', type=int, default=BENCH_DEFAULTS['repeats'])
    bench.add_argument('--out', type=Path, required=True, help='Report CSV path')
    _add_train_flags(bench)
    _add_common(bench)
    bench.set_defaults(handler=cmd_bench)

    # inspect
    inspect = commands.add_parser('inspect', help='Summarize a saved model')
    inspect.add_argument('--model', type=Path, required=True)
    inspect.add_argument('--format', choices=['text', 'csv'], default='text')
    _add_common(inspect)
    inspect.set_defaults(handler=cmd_inspect)

    return parser


def _manifest_path(args: argparse.Namespace) -> Optional[Path]:
    if args.manifest is not None:
        return args.manifest
    out = getattr(args, 'out', None)
    if out is not None:
        return Path(f"{out}.manifest.json")
    return None


def _record_failure(tracker: ManifestTracker, error: BaseException) -> None:
    try:
        tracker.fail(error)
    except OSError as e:
        logger.error(f"[ERROR] Failure manifest not written: {e}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config.setup_logging(args.log_level, log_to_file=args.log_file)

    tracker = ManifestTracker(args.command, _manifest_path(args))
    tracker.start()
    try:
        metrics = args.handler(args, tracker)
    except InfoForestError as e:
        logger.error(f"[ERROR] {e}")
        _record_failure(tracker, e)
        return e.exit_code
    except OSError as e:
        logger.error(f"[ERROR] I/O failure: {e}")
        _record_failure(tracker, e)
        return EXIT_IO

    tracker.complete(metrics)
    logger.info(f"[OK] {args.command} completed")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
