"""
Bounds module

Epoch and block partition schemes and log-space evaluators of the
exponential-moment and power-moment concentration bounds.

Usage example:
    from bounds import epoch_index, kmt_exponential_bound

    epoch_index(277)                                   # 4
    kmt_exponential_bound(0.5, 1.0, 10.0, 4, c=1.0).value
"""

from .value import BoundValue, NON_RIGOROUS_DEFAULT, resolve_constant
from .epochs import D_exact, d_exact, epoch_blocks, epoch_bounds, epoch_index, log2_D, log2_d
from .exponential import (
    exponential_bound_series,
    kmt_exponential_bound,
    kmt_exponential_bound_uniform,
    naive_exponential_series,
    sakhanenko_exp_mgf_bound,
    sakhanenko_exp_tail_bound,
    series_rows,
    uniform_threshold,
)
from .blocks import BlockPartition, TailBound, block_mass, block_partition, closed_form_nm, floor_log2, power_nm
from .power import check_weight_sequences, power_bound, power_bound_series
from .slower import SlowerSequence, slower_sequence, sweep_tails
from .lemmas import VarianceDiffBound, partial_sum_constant, sakhanenko_poly_bound, variance_diff_bound

__all__ = [
    "BoundValue",
    "NON_RIGOROUS_DEFAULT",
    "resolve_constant",
    "D_exact",
    "d_exact",
    "epoch_blocks",
    "epoch_bounds",
    "epoch_index",
    "log2_D",
    "log2_d",
    "exponential_bound_series",
    "kmt_exponential_bound",
    "kmt_exponential_bound_uniform",
    "naive_exponential_series",
    "sakhanenko_exp_mgf_bound",
    "sakhanenko_exp_tail_bound",
    "series_rows",
    "uniform_threshold",
    "BlockPartition",
    "TailBound",
    "block_mass",
    "block_partition",
    "closed_form_nm",
    "floor_log2",
    "power_nm",
    "check_weight_sequences",
    "power_bound",
    "power_bound_series",
    "SlowerSequence",
    "slower_sequence",
    "sweep_tails",
    "VarianceDiffBound",
    "partial_sum_constant",
    "sakhanenko_poly_bound",
    "variance_diff_bound",
]
