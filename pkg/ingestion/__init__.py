"""
Data ingestion module

Loads distribution specs, weight-sequence CSVs with their tail sidecars,
family sweeps and check batches.

Usage example:
    from ingestion import load_spec, load_weight_sequence

    spec = load_spec('{"family": "rademacher", "params": {}}')
    weights = load_weight_sequence("data/weights.csv")    # tail from data/weights.json
"""

from .loaders import (
    WeightSequence,
    load_batch,
    load_spec,
    load_sweep,
    load_weight_sequence,
    parametric_sweep,
)

__all__ = [
    "WeightSequence",
    "load_batch",
    "load_spec",
    "load_sweep",
    "load_weight_sequence",
    "parametric_sweep",
]
