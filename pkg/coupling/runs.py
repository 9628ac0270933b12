"""
Coupled paths and their discrepancy process
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from coupling.base_strategy import CouplingStrategy
from coupling.strategies import check_supported
from dist import DistributionSpec, make_rng
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

LOG_WEIGHT = "log"
POWER_WEIGHT = "power"
WEIGHTS = (LOG_WEIGHT, POWER_WEIGHT)


@dataclass
class CouplingRun:
    """
    Seeded coupled paths; lambda_path is the running sum of x - y

    lambda_path is one np.cumsum pass, so consecutive differences reproduce
    x - y up to rounding: |diff(lambda)_k - (x_k - y_k)| <= 2 eps max_j |lambda_j|
    with eps the float64 machine epsilon.
    """
    spec: DistributionSpec
    strategy: str
    seed: int
    x_path: np.ndarray
    y_path: np.ndarray
    lambda_path: np.ndarray

    @property
    def K(self) -> int:
        return int(self.x_path.size)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "k": np.arange(1, self.K + 1),
            "x": self.x_path,
            "y": self.y_path,
            "lambda": self.lambda_path,
        })


def couple_paths(spec: DistributionSpec, K: int, strategy: Union[str, CouplingStrategy], seed: int,
                 rng: Optional[np.random.Generator] = None) -> CouplingRun:
    """
    Draws coupled paths of length K

    Args:
        spec: Law of X
        K: Path length, K >= 1
        strategy: Strategy kind or instance
        seed: Seed of the run (ignored for drawing when rng is given)
        rng: Generator to draw from instead of one built from seed

    Returns:
        CouplingRun whose lambda_path is np.cumsum(x - y)
    """
    if K < 1:
        raise InfeasibleParameterError(f"K must be >= 1, got {K}")
    instance = check_supported(spec, strategy)
    rng = make_rng(seed) if rng is None else rng
    x, y = instance.couple(spec, int(K), rng)
    return CouplingRun(spec, instance.kind, int(seed), x, y, np.cumsum(x - y))


def weight_vector(weight: str, K: int, q: Optional[float] = None,
                  a: Optional[Sequence[float]] = None) -> np.ndarray:
    """
    w(1..K): log k, k^{1/q}, or explicit normalizers a

    Args:
        weight: "log" or "power"
        K: Path length
        q: Moment order for the power weight
        a: Explicit normalizers (override k^{1/q} for the power weight)

    Returns:
        Array of length K
    """
    k = np.arange(1, K + 1, dtype=float)
    if weight == LOG_WEIGHT:
        return np.log(k)
    if weight == POWER_WEIGHT:
        if a is not None:
            a = np.asarray(a, dtype=float)
            if a.size < K:
                raise InfeasibleParameterError(f"normalizers cover {a.size} < K = {K} indices")
            return a[:K]
        if q is None or not q > 0:
            raise InfeasibleParameterError("the power weight needs q > 0")
        return k ** (1.0 / q)
    raise InfeasibleParameterError(f"unknown weight '{weight}', expected one of {WEIGHTS}")


def check_sup_range(weight: str, m: int, K: int):
    """log k vanishes at k = 1, so the log weight starts at m = 2"""
    lower = 2 if weight == LOG_WEIGHT else 1
    if not lower <= m <= K:
        raise InfeasibleParameterError(f"m = {m} outside {lower}..{K} for the {weight} weight")


def discrepancy_sup_path(lambda_path: np.ndarray, weight: str, m: int, q: Optional[float] = None,
                         a: Optional[Sequence[float]] = None) -> float:
    """max_{m <= k <= K} |Lambda_k| / w(k) of a discrepancy path"""
    K = int(np.asarray(lambda_path).size)
    check_sup_range(weight, m, K)
    w = weight_vector(weight, K, q, a)[m - 1:]
    return float(np.max(np.abs(lambda_path[m - 1:]) / w))


def discrepancy_sup(run: Union[CouplingRun, Sequence[float]], weight: str = LOG_WEIGHT, m: int = 2,
                    q: Optional[float] = None, a: Optional[Sequence[float]] = None) -> float:
    """
    Weighted supremum of the discrepancy process

    Args:
        run: CouplingRun or a bare lambda path
        weight: "log" (m >= 2) or "power" (k^{1/q}, or a when given)
        m: First index of the supremum, m <= K
        q: Moment order of the power weight
        a: Explicit normalizers

    Returns:
        Nonnegative real
    """
    path = run.lambda_path if isinstance(run, CouplingRun) else np.asarray(run, dtype=float)
    value = discrepancy_sup_path(path, weight, int(m), q, a)
    if not math.isfinite(value):
        logger.warning(f"⚠️ non-finite discrepancy supremum {value}")
    return value
