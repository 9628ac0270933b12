"""
Input loaders: distribution specs, weight sequences, sweeps and check batches
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from bounds import TailBound
from dist import DistributionSpec
from regularity import FamilySweep
from utils.exceptions import InvalidSpecError
from utils.helpers import read_versioned_csv

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_json(source: PathLike) -> Any:
    path = Path(source)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise InvalidSpecError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InvalidSpecError(f"{path}: malformed JSON ({e})") from e


def load_spec(source: str) -> DistributionSpec:
    """
    Reads a spec from a JSON file or from inline JSON text

    Args:
        source: Path of a JSON file, or text starting with '{'

    Returns:
        DistributionSpec
    """
    text = source.strip()
    if text.startswith("{"):
        return DistributionSpec.from_json(text)
    path = Path(source)
    if not path.exists():
        raise InvalidSpecError(f"spec file not found: {path}")
    spec = DistributionSpec.from_json(path.read_text(encoding="utf-8"))
    logger.debug(f"spec {spec.label} loaded from {path}")
    return spec


@dataclass
class WeightSequence:
    """
    Columns of a weight CSV

    u holds u_k = E|X_k|^q / ubar_a_k^q; a and ubar_a are the normalizers
    when the file carries them.
    """
    u: List[float]
    tail: TailBound
    a: Optional[List[float]] = None
    ubar_a: Optional[List[float]] = None

    @property
    def horizon(self) -> int:
        return len(self.u)


def _column(frame: pd.DataFrame, *names: str) -> Optional[List[float]]:
    for name in names:
        if name in frame.columns:
            return frame[name].astype(float).tolist()
    return None


def load_weight_sequence(csv_path: PathLike, sidecar: Optional[PathLike] = None) -> WeightSequence:
    """
    Reads a weight sequence CSV (columns k, u_k and optionally a_k, ubar_a_k)

    The tail majorant comes from the JSON sidecar {"type": "zero"|"geometric",
    "ratio": r}; by default the file next to the CSV with suffix .json is used
    when it exists, else the tail is zero.

    Args:
        csv_path: CSV file
        sidecar: Sidecar JSON file

    Returns:
        WeightSequence
    """
    path = Path(csv_path)
    if not path.exists():
        raise InvalidSpecError(f"weight file not found: {path}")
    try:
        frame = read_versioned_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InvalidSpecError(f"{path}: unreadable CSV ({e})") from e
    if "k" in frame.columns:
        frame = frame.sort_values("k")
        expected = list(range(1, len(frame) + 1))
        if frame["k"].astype(int).tolist() != expected:
            raise InvalidSpecError(f"{path}: column k must run 1..{len(frame)} without gaps")
    u = _column(frame, "u_k", "u")
    if u is None:
        raise InvalidSpecError(f"{path}: missing column u_k")

    sidecar_path = Path(sidecar) if sidecar is not None else path.with_suffix(".json")
    if sidecar is not None or sidecar_path.exists():
        tail = TailBound.from_dict(_read_json(sidecar_path))
    else:
        tail = TailBound()
    sequence = WeightSequence(u, tail, _column(frame, "a_k", "a"), _column(frame, "ubar_a_k", "ubar_a"))
    logger.info(f"📊 {sequence.horizon} weights loaded from {path} (tail: {tail.type})")
    return sequence


def load_sweep(source: PathLike) -> FamilySweep:
    """Reads {"specs": [...], "m_grid": [...], "k_grid": [...]}"""
    payload = _read_json(source)
    if not isinstance(payload, dict):
        raise InvalidSpecError(f"{source}: a sweep must be a JSON object")
    return FamilySweep.from_dict(payload)


def parametric_sweep(family: str, param: str, values: List[float],
                     fixed: Optional[Dict[str, float]] = None) -> FamilySweep:
    """
    Sweep over one parameter of a family, other parameters held fixed

    Args:
        family: Family name
        param: Parameter varied
        values: Values of that parameter
        fixed: Remaining parameters

    Returns:
        FamilySweep in the order of values
    """
    if not values:
        raise InvalidSpecError("a parametric sweep needs at least one value")
    specs = [DistributionSpec.from_dict({"family": family, "params": {**(fixed or {}), param: float(v)}})
             for v in values]
    return FamilySweep(specs=specs)


def load_batch(source: PathLike) -> List[Dict[str, Any]]:
    """Reads a JSON list of {"check": name, "args": {...}} requests"""
    payload = _read_json(source)
    if not isinstance(payload, list):
        raise InvalidSpecError(f"{source}: a check batch must be a JSON list")
    return payload
