"""
Oracles module

Deterministic checkers for the inequalities behind the bounds, usable
directly as test predicates, plus the randomized batteries and JSON batch
mode behind ``kmtlab verify``.

Usage example:
    from oracles import truncation_sum_check, lemma_suite

    truncation_sum_check(1.0, 3.0, 5).holds      # True
    lemma_suite(cases=100, seed=1).ok
"""

from .checks import (
    CheckResult,
    epoch_bound_identity_checks,
    maximal_weighted_check,
    moment_split_check,
    poly_from_exp_check,
    sub_gaussian_moment_check,
    truncated_variance_check,
    truncation_sum,
    truncation_sum_check,
    variance_diff_check,
)
from .suites import (
    BATCH_CHECKS,
    SuiteReport,
    block_agreement_check,
    epoch_table_check,
    lemma_suite,
    partition_suite,
    random_light_spec,
    random_spec,
    run_batch,
)

__all__ = [
    "CheckResult",
    "epoch_bound_identity_checks",
    "maximal_weighted_check",
    "moment_split_check",
    "poly_from_exp_check",
    "sub_gaussian_moment_check",
    "truncated_variance_check",
    "truncation_sum",
    "truncation_sum_check",
    "variance_diff_check",
    "BATCH_CHECKS",
    "SuiteReport",
    "block_agreement_check",
    "epoch_table_check",
    "lemma_suite",
    "partition_suite",
    "random_light_spec",
    "random_spec",
    "run_batch",
]
