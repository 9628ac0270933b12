"""
Helper functions
"""

import os
import io
import json
import math
import tempfile
from pathlib import Path
from typing import Any, Tuple, Union

import pandas as pd
from scipy.stats import norm

MASK64 = (1 << 64) - 1
CSV_SCHEMA_LINE = "#schema=1"


def splitmix64(value: int) -> int:
    """
    SplitMix64 finalizer

    Args:
        value: Integer, reduced modulo 2^64

    Returns:
        Mixed 64-bit integer
    """
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, stream: int) -> int:
    """
    Derives the child seed of a replication stream

    child = splitmix64(master ^ splitmix64(stream)); pure, so every worker
    derives the same seed for the same stream index.

    Args:
        master_seed: Master seed
        stream: Stream index (replication number)

    Returns:
        Child seed in [0, 2^64)
    """
    return splitmix64((master_seed & MASK64) ^ splitmix64(stream & MASK64))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """
    Wilson score interval for a binomial proportion

    Args:
        successes: Number of successes
        trials: Number of trials
        confidence: Two-sided confidence level

    Returns:
        (low, high) tuple
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p_hat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def ensure_directory_exists(directory_path: Union[str, Path]):
    """
    Ensures directory exists, creates if it doesn't

    Args:
        directory_path: Directory path
    """
    if directory_path and not os.path.exists(directory_path):
        os.makedirs(directory_path, exist_ok=True)


def atomic_write_text(path: Union[str, Path], text: str):
    """
    Writes text through a temporary file and an atomic rename

    Nothing is left at ``path`` if writing fails.

    Args:
        path: Destination file
        text: File contents
    """
    path = Path(path)
    ensure_directory_exists(path.parent)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def to_json(payload: Any) -> str:
    """
    Serializes a report deterministically (sorted keys, +inf as Infinity)

    Args:
        payload: JSON-compatible object

    Returns:
        JSON text ending with a newline
    """
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def frame_to_csv(frame: pd.DataFrame) -> str:
    """
    Renders a DataFrame as versioned CSV text

    Args:
        frame: Table to render

    Returns:
        CSV text whose first line is the schema comment
    """
    buffer = io.StringIO()
    buffer.write(CSV_SCHEMA_LINE + "\n")
    frame.to_csv(buffer, index=False, lineterminator="\n", float_format="%.17g")
    return buffer.getvalue()


def read_versioned_csv(path: Union[str, Path]) -> pd.DataFrame:
    """
    Reads a CSV file, skipping comment lines such as the schema header

    Args:
        path: CSV file

    Returns:
        DataFrame
    """
    return pd.read_csv(path, comment="#", float_precision="round_trip")

