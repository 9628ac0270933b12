"""
Slower normalizing sequence at a finite horizon

Given a nondecreasing diverging a and the sweep tail j -> sup_i sum_{k >= j}
b_k^{(i)} / a_k, picks the subsequence n(1) < n(2) < ... greedily (first
index meeting a_{n(k+1)} >= 2 a_{n(k)} and tail(n(k)) <= 1/(k+1)^3) and
returns ubar_a = a / v with

    v(m) = 1                                         for m <= n(1)
    v(m) = v(n(k)) + (a_m - a_{n(k)}) / a_{n(k+1)}   for n(k) < m <= n(k+1)

Past the last subsequence index v stays constant.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from utils.exceptions import HorizonExhaustedError, InfeasibleParameterError

logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-12


@dataclass
class SlowerSequence:
    """ubar_a with the subsequence and v values certifying it"""
    a: np.ndarray
    ubar_a: np.ndarray
    v: np.ndarray
    n_k: List[int] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return int(self.a.size)

    def v_at_subsequence(self) -> List[float]:
        return [float(self.v[n - 1]) for n in self.n_k]

    def violations(self) -> List[str]:
        """Broken certificate properties (empty when all hold)"""
        problems = []
        if np.any(self.ubar_a > self.a * (1.0 + CERTIFICATE_TOL)):
            problems.append("ubar_a > a")
        if np.any(np.diff(self.ubar_a) < -CERTIFICATE_TOL * self.ubar_a[1:]):
            problems.append("ubar_a not nondecreasing")
        ratio = self.ubar_a / self.a
        if np.any(np.diff(ratio) > CERTIFICATE_TOL * ratio[:-1]):
            problems.append("ubar_a / a not nonincreasing")
        for k, v_k in enumerate(self.v_at_subsequence(), start=1):
            if v_k > k * (1.0 + CERTIFICATE_TOL):
                problems.append(f"v(n({k})) = {v_k:.6g} > {k}")
            if v_k < 1.0 + (k - 1) / 2.0 - CERTIFICATE_TOL * k:
                problems.append(f"v(n({k})) = {v_k:.6g} < 1 + ({k} - 1)/2")
        return problems

    def to_dict(self) -> Dict:
        return {
            "horizon": self.horizon,
            "n_k": self.n_k,
            "v_at_n_k": self.v_at_subsequence(),
            "ubar_a_last": float(self.ubar_a[-1]),
            "violations": self.violations(),
        }


def sweep_tails(b: Sequence[Sequence[float]], a: Sequence[float]) -> np.ndarray:
    """
    j -> sup_i sum_{k >= j} b_k^{(i)} / a_k over a finite sweep

    Args:
        b: Array of shape (specs, horizon), nonnegative
        a: Normalizers of length horizon

    Returns:
        Array of length horizon
    """
    b = np.atleast_2d(np.asarray(b, dtype=float))
    a = np.asarray(a, dtype=float)
    if b.shape[1] != a.size:
        raise InfeasibleParameterError("b and a must share the horizon")
    ratios = b / a
    tails = np.cumsum(ratios[:, ::-1], axis=1)[:, ::-1]
    return tails.max(axis=0)


def slower_sequence(tails: Union[Sequence[float], Callable[[int], float]], a: Sequence[float],
                    horizon: Optional[int] = None, levels: Optional[int] = None) -> SlowerSequence:
    """
    Builds ubar_a greedily

    Args:
        tails: Sweep tail values at j = 1..horizon, or a callable j -> tail
        a: Nondecreasing positive sequence a_1..a_horizon
        horizon: Number of indices used (default len(a))
        levels: Required number of subsequence points; None builds as many as fit

    Returns:
        SlowerSequence

    Raises:
        HorizonExhaustedError: n(k) for some k <= levels (or n(1)) does not
            exist within the horizon
    """
    a = np.asarray(a, dtype=float)
    horizon = a.size if horizon is None else int(horizon)
    if horizon < 1 or horizon > a.size:
        raise InfeasibleParameterError(f"horizon {horizon} must lie in 1..{a.size}")
    a = a[:horizon]
    if np.any(a <= 0) or np.any(np.diff(a) < 0):
        raise InfeasibleParameterError("a must be positive and nondecreasing")
    tail_at = tails if callable(tails) else (lambda j, _t=np.asarray(tails, dtype=float): float(_t[j - 1]))

    n_k: List[int] = []
    j = 1
    while j <= horizon:
        k = len(n_k) + 1
        doubled = not n_k or a[j - 1] >= 2.0 * a[n_k[-1] - 1]
        if doubled and tail_at(j) <= 1.0 / (k + 1) ** 3:
            n_k.append(j)
            if levels is not None and len(n_k) >= levels:
                break
        j += 1
    if not n_k:
        raise HorizonExhaustedError(1, horizon)
    if levels is not None and len(n_k) < levels:
        raise HorizonExhaustedError(len(n_k) + 1, horizon)

    v = np.ones(horizon)
    for k in range(len(n_k) - 1):
        lo, hi = n_k[k], n_k[k + 1]
        idx = np.arange(lo + 1, hi + 1)
        v[idx - 1] = v[lo - 1] + (a[idx - 1] - a[lo - 1]) / a[hi - 1]
    last = n_k[-1]
    v[last:] = v[last - 1]

    result = SlowerSequence(a=a, ubar_a=a / v, v=v, n_k=n_k)
    logger.debug(f"slower sequence: {len(n_k)} subsequence points within horizon {horizon}")
    return result
