"""
Auxiliary bound formulas of the power-moment case
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from dist import DistributionSpec, tail_moment, truncated_variance
from bounds.value import resolve_constant
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)


def sakhanenko_poly_bound(q: float, moments: Sequence[float], Cs: Optional[float] = None) -> float:
    """
    C_S(q) sum_i E|X_i|^q, the bound on E max_k |Lambda_k|^q over n steps

    Args:
        q: Moment order, q > 2
        moments: E|X_i|^q for i = 1..n
        Cs: Constant C_S(q) (None uses the configured non-rigorous default)

    Returns:
        Bound value
    """
    if not q > 2:
        raise InfeasibleParameterError(f"q must exceed 2, got {q}")
    moments = np.asarray(moments, dtype=float)
    if moments.size == 0 or np.any(~np.isfinite(moments)) or np.any(moments < 0):
        raise InfeasibleParameterError("moments must be a nonempty list of finite nonnegative values")
    Cs = resolve_constant(Cs, "C_S(q)", [])
    return Cs * float(math.fsum(moments))


def partial_sum_constant(q: float) -> float:
    """
    q / (q - 2): sum_{k=1}^j k^{-2/q} <= C (j + 1)^{1 - 2/q} for every j >= 1

    Comparison with the integral of x^{-2/q} over [0, j] gives this C.
    """
    if not q > 2:
        raise InfeasibleParameterError(f"q must exceed 2, got {q}")
    return q / (q - 2.0)


@dataclass
class VarianceDiffBound:
    """Left side (horizon sum plus tail majorant) against 4 C_q E[|X|^q 1{|X|^q > m}]"""
    lhs: float
    rhs: float
    partial_sum: float
    tail_majorant: float
    horizon: int
    terms_evaluated: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-15

    def to_dict(self) -> Dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "partial_sum": self.partial_sum,
            "tail_majorant": self.tail_majorant,
            "horizon": self.horizon,
            "terms_evaluated": self.terms_evaluated,
            "holds": self.holds,
        }


def variance_diff_bound(spec: DistributionSpec, q: float, m: int, Cq: Optional[float] = None,
                        horizon: int = 10_000) -> VarianceDiffBound:
    """
    sum_{k >= m} Var(Ytilde_k - Yhat_k) / k^{2/q} against 4 C_q E[|X|^q 1{|X|^q > m}]

    Var(Ytilde_k - Yhat_k) = (sigma - sigmatilde_k)^2 with sigmatilde_k^2 the
    variance of X truncated at k^{1/q}. Terms k in m..horizon are summed
    exactly; beyond the horizon the sum is majorized by
    (2q/(q - 2)) E[|X|^q 1{|X|^q > horizon}]. Once k^{1/q} passes the support
    bound every further term is zero.

    Args:
        spec: Distribution spec with E|X|^q finite
        q: Moment order, q > 2
        m: Start index, m >= 1
        Cq: Partial-sum constant (default q/(q - 2), which is valid)
        horizon: Last exactly summed index

    Returns:
        VarianceDiffBound
    """
    if not q > 2:
        raise InfeasibleParameterError(f"q must exceed 2, got {q}")
    if m < 1 or horizon < m:
        raise InfeasibleParameterError(f"need 1 <= m <= horizon, got m={m}, horizon={horizon}")
    law = spec.law
    if not q < law.moment_limit:
        raise InfeasibleParameterError(f"E|X|^{q:g} diverges for {spec.label}")
    Cq = partial_sum_constant(q) if Cq is None else resolve_constant(Cq, "C_q", [])

    sigma = law.sigma
    support_power = law.support_bound ** q
    terms = []
    k = m
    while k <= horizon:
        if k >= support_power:
            break
        sigma_k = math.sqrt(truncated_variance(spec, k ** (1.0 / q)))
        terms.append((sigma - sigma_k) ** 2 / k ** (2.0 / q))
        k += 1
    partial = math.fsum(terms)
    tail = 0.0
    if horizon < support_power:
        tail = 2.0 * q / (q - 2.0) * tail_moment(spec, q, float(horizon))
    rhs = 4.0 * Cq * tail_moment(spec, q, float(m))
    result = VarianceDiffBound(partial + tail, rhs, partial, tail, horizon, len(terms))
    logger.debug(f"variance difference sum for {spec.label}: lhs={result.lhs:.6g}, rhs={rhs:.6g}")
    return result
