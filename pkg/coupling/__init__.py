"""
Coupling module

Explicit surrogate couplings (X, Y) with exact marginals, the discrepancy
process and Monte Carlo tail estimates of its weighted supremum.

Usage example:
    from coupling import couple_paths, discrepancy_sup, tail_estimate
    from dist import DistributionSpec

    run = couple_paths(DistributionSpec.rademacher(), 256, "per_variable_quantile", seed=1)
    discrepancy_sup(run, "log", m=4)
"""

from .base_strategy import CouplingStrategy, quantile_gaussian
from .strategies import (
    STRATEGIES,
    SURROGATE_NOTE,
    BlockwiseSumQuantileStrategy,
    IndependentStrategy,
    PerVariableQuantileStrategy,
    check_supported,
    get_strategy,
)
from .runs import (
    LOG_WEIGHT,
    POWER_WEIGHT,
    WEIGHTS,
    CouplingRun,
    check_sup_range,
    couple_paths,
    discrepancy_sup,
    weight_vector,
)
from .estimation import (
    MIN_REPS,
    PairedDifference,
    ReplicationTask,
    TailEstimate,
    estimate_from_sups,
    paired_sup_difference,
    replicate_sups,
    tail_estimate,
)

__all__ = [
    "CouplingStrategy",
    "quantile_gaussian",
    "STRATEGIES",
    "SURROGATE_NOTE",
    "BlockwiseSumQuantileStrategy",
    "IndependentStrategy",
    "PerVariableQuantileStrategy",
    "check_supported",
    "get_strategy",
    "LOG_WEIGHT",
    "POWER_WEIGHT",
    "WEIGHTS",
    "CouplingRun",
    "check_sup_range",
    "couple_paths",
    "discrepancy_sup",
    "weight_vector",
    "MIN_REPS",
    "PairedDifference",
    "ReplicationTask",
    "TailEstimate",
    "estimate_from_sups",
    "paired_sup_difference",
    "replicate_sups",
    "tail_estimate",
]
