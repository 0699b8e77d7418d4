from .config import ConfigError, ExperimentConfig, config_from_dict, default_config, load_config
from .experiments import (
    ExperimentResult,
    run_benchmark,
    run_eig_study,
    run_experiment,
    run_single,
    run_variant_compare,
)
from .stats import SummaryStatistics, bootstrap_median_interval, summarize
