"""Benchmark configuration for the IF vs RF experiments"""

EXPERIMENTS = ("stripes-depth", "hidden-parts")

# Default benchmark arguments
BENCH_DEFAULTS = {
    'n_groups_list': (4, 8, 16),
    'per_group': 100,
    'repeats': 5,
    'trees': 1,
    'tau_grid': (0.25, 0.5, 1.0),
    # stripes-depth training overrides (explicit flags win): axis stumps, every
    # midpoint a threshold, no gain floor. With 4 bins a node spanning a
    # multiple of 8 groups has matching class histograms.
    'stripes_args': {
        'bins': 4,
        'delta': 0.0,
        'n_axis': 2,
        'n_linear': 0,
        'n_thresholds': 4096,
    },
    'n_parts': 4,
    'per_part': 100,
    'separation': 2.0,
    'noise': 0.5,
    'seed': 0,
}

# Held-out data is generated from the training seed plus this offset
TEST_SEED_OFFSET = 10_000

REPORT_COLUMNS = [
    'method', 'n_groups', 'repeat', 'seed', 'mean_depth', 'max_depth', 'mean_balance',
    'kl_nodes', 'h_nodes', 'leaves', 'train_acc', 'test_acc',
]

# Acceptance thresholds
ACCEPTANCE_THRESHOLDS = {
    'min_rf_depth_growth': 4,        # RF depth(16 groups) - depth(4 groups)
    'min_hidden_parts_accuracy': 0.9,
    'max_whole_divergence': 0.05,    # nats, measurement axis over the whole dataset
    'min_part_divergence': 0.5,      # nats, measurement axis within one part
}
