"""
Power-moment case:

    P( sup_{k >= m} |Lambda_k| / a_k >= eps )
        <= (C(q) / eps^q) (T_m + (ubar_a_{n_m} / a_{n_m})^q U)
"""

import math
import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np

from bounds.blocks import BlockPartition, power_nm
from bounds.value import BoundValue, resolve_constant
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

MONOTONE_RTOL = 1e-12


def check_weight_sequences(a: Sequence[float], ubar_a: Sequence[float], horizon: int):
    """
    Raises unless a and ubar_a are positive and nondecreasing on 1..horizon,
    ubar_a <= a, and ubar_a / a is nonincreasing
    """
    a = np.asarray(a, dtype=float)
    ubar_a = np.asarray(ubar_a, dtype=float)
    if a.size < horizon or ubar_a.size < horizon:
        raise InfeasibleParameterError(f"weight sequences must cover the horizon {horizon}")
    a, ubar_a = a[:horizon], ubar_a[:horizon]
    for name, seq in (("a", a), ("ubar_a", ubar_a)):
        if np.any(~np.isfinite(seq)) or np.any(seq <= 0):
            raise InfeasibleParameterError(f"{name} must be positive and finite")
        if np.any(np.diff(seq) < -MONOTONE_RTOL * seq[1:]):
            raise InfeasibleParameterError(f"{name} must be nondecreasing")
    if np.any(ubar_a > a * (1.0 + MONOTONE_RTOL)):
        raise InfeasibleParameterError("ubar_a must not exceed a")
    ratio = ubar_a / a
    if np.any(np.diff(ratio) > MONOTONE_RTOL * ratio[:-1]):
        raise InfeasibleParameterError("ubar_a / a must be nonincreasing")


def power_bound(partition: BlockPartition, a: Sequence[float], ubar_a: Sequence[float], m: int,
                epsilon: float, Cq: Optional[float] = None, q: float = 3.0) -> BoundValue:
    """
    Evaluates the power-moment bound

    Args:
        partition: Block partition of u_k = E|X_k|^q / ubar_a_k^q
        a: Nondecreasing positive normalizers a_1..a_H
        ubar_a: Slower normalizers, ubar_a <= a with ubar_a / a nonincreasing
        m: Start index in 1..H
        epsilon: Threshold
        Cq: Constant C(q) (None uses the configured non-rigorous default)
        q: Moment order, q > 2

    Returns:
        BoundValue with ledger [log T_m, q log(ubar_a/a)_{n_m} + log U]
    """
    if not q > 2:
        raise InfeasibleParameterError(f"q must exceed 2, got {q}")
    if not epsilon > 0 or not math.isfinite(epsilon):
        raise InfeasibleParameterError(f"epsilon must be positive and finite, got {epsilon}")
    check_weight_sequences(a, ubar_a, partition.horizon)
    warnings: List[str] = []
    Cq = resolve_constant(Cq, "C(q)", warnings)
    n_m = power_nm(partition, m)

    log_prefactor = math.log(Cq) - q * math.log(epsilon)
    T_m = float(partition.T(m))
    log_T_m = math.log(T_m) if T_m > 0 else -math.inf
    log_ratio = math.log(ubar_a[n_m - 1]) - math.log(a[n_m - 1])
    log_second = q * log_ratio + math.log(partition.U)
    tail_part = float(partition.tail_beyond)
    # share of the value contributed by the analytic tail beyond the horizon
    truncation = math.exp(log_prefactor) * tail_part * (1.0 + math.exp(q * log_ratio)) if tail_part > 0 else 0.0

    value = BoundValue.from_terms(
        [log_T_m, log_second],
        log_prefactor,
        truncation,
        warnings=warnings,
        params={"m": int(m), "epsilon": epsilon, "Cq": Cq, "q": q, "n_m": n_m},
    )
    if value.vacuous:
        logger.warning(f"⚠️ power bound {value.value:.6g} at m={m}, eps={epsilon:g} is vacuous")
    return value


def power_bound_series(partition: BlockPartition, a: Sequence[float], ubar_a: Sequence[float],
                       m_grid: Iterable[int], epsilon_grid: Iterable[float], Cq: Optional[float] = None,
                       q: float = 3.0) -> List[BoundValue]:
    """One BoundValue per (m, epsilon) grid point, m outer and epsilon inner"""
    return [power_bound(partition, a, ubar_a, int(m), float(eps), Cq, q)
            for m in m_grid for eps in epsilon_grid]
