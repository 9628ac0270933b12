"""
Deterministic inequality checks

Each check computes both sides of an inequality lhs <= rhs and reports the
slack rhs - lhs. holds is decided with a relative tolerance of 1e-12 plus
the quadrature error of both sides when continuous laws are integrated.
"""

import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from bounds import D_exact, d_exact, variance_diff_bound
from dist import (
    DistributionSpec,
    abs_moment_eval,
    exp_abs_moment_eval,
    truncated_variance_eval,
    upper_tail_first,
    upper_tail_second,
)
from regularity import sub_gaussian_moment_bound
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

RELATIVE_TOL = 1e-12
PROB_TOL = 1e-12

Number = Union[int, float, Fraction]


def _as_float(value: Number) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf if value > 0 else -math.inf


@dataclass
class CheckResult:
    """lhs <= rhs with its slack; witness echoes the inputs"""
    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    witness: Dict[str, Any] = field(default_factory=dict)
    error_bound: float = 0.0
    theorem_backed: bool = True
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def compare(cls, name: str, lhs: Number, rhs: Number, witness: Optional[Dict[str, Any]] = None,
                error_bound: float = 0.0, theorem_backed: bool = True,
                details: Optional[Dict[str, Any]] = None) -> "CheckResult":
        """
        Builds a result; exact integers and rationals are compared exactly
        """
        if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
            holds = lhs <= rhs
            slack = _as_float(rhs - lhs)
        else:
            lhs, rhs = float(lhs), float(rhs)
            slack = rhs - lhs if not (math.isinf(lhs) and math.isinf(rhs)) else 0.0
            holds = slack >= -(RELATIVE_TOL * max(1.0, abs(rhs)) + error_bound)
        return cls(name, _as_float(lhs), _as_float(rhs), slack, bool(holds), dict(witness or {}),
                   error_bound, theorem_backed, dict(details or {}))

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "name": self.name,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "witness": self.witness,
            "theorem_backed": self.theorem_backed,
        }
        if self.error_bound:
            payload["error_bound"] = self.error_bound
        if self.details:
            payload["details"] = self.details
        return payload


def _spec_witness(spec: DistributionSpec) -> Dict[str, Any]:
    return {"family": spec.family.value, "params": dict(spec.params)}


def maximal_weighted_check(a: Sequence[float], b: Sequence[float], m: int, K: int,
                           from_origin: bool = False) -> CheckResult:
    """
    max_{m<k<=K} |sum_{i=m+1}^k b_i| / a_k <= 2 max_{m<k<=K} |sum_{i=m+1}^k b_i / a_i|

    Both sides are evaluated in exact rational arithmetic. With
    from_origin=True the right side sums from i = 1 instead; that form agrees
    with the default at m = 0 and can fail for m > 0, so it is reported as
    not theorem-backed.

    Args:
        a: Positive nondecreasing a_1..a_K
        b: Real b_1..b_K
        m: Integer, 0 <= m < K
        K: Integer upper index

    Returns:
        CheckResult
    """
    if not 0 <= m < K:
        raise InfeasibleParameterError(f"need 0 <= m < K, got m={m}, K={K}")
    if len(a) < K or len(b) < K:
        raise InfeasibleParameterError(f"sequences must have at least K={K} entries")
    a_exact = [Fraction(float(v)) for v in a[:K]]
    b_exact = [Fraction(float(v)) for v in b[:K]]
    if any(v <= 0 for v in a_exact) or any(y < x for x, y in zip(a_exact[:-1], a_exact[1:])):
        raise InfeasibleParameterError("a must be positive and nondecreasing")

    plain = Fraction(0)
    weighted = sum((b_exact[i] / a_exact[i] for i in range(m)), Fraction(0)) if from_origin else Fraction(0)
    lhs, rhs_half = Fraction(0), Fraction(0)
    for k in range(m + 1, K + 1):
        plain += b_exact[k - 1]
        weighted += b_exact[k - 1] / a_exact[k - 1]
        lhs = max(lhs, abs(plain) / a_exact[k - 1])
        rhs_half = max(rhs_half, abs(weighted))
    witness = {"a": [float(v) for v in a[:K]], "b": [float(v) for v in b[:K]], "m": m, "K": K}
    return CheckResult.compare("maximal_weighted", lhs, 2 * rhs_half, witness,
                               theorem_backed=not from_origin or m == 0)


DiscreteLawInput = Tuple[Sequence[float], Sequence[float]]


def _check_discrete(name: str, law: DiscreteLawInput) -> Tuple[np.ndarray, np.ndarray]:
    values, probs = (np.asarray(v, dtype=float) for v in law)
    if values.shape != probs.shape or values.size == 0:
        raise InfeasibleParameterError(f"{name}: values and probabilities must be nonempty and aligned")
    if np.any(probs < 0) or abs(math.fsum(probs) - 1.0) > PROB_TOL:
        raise InfeasibleParameterError(f"{name}: probabilities must be nonnegative and sum to 1")
    return values, probs


def _abs_power_mean(values: np.ndarray, probs: np.ndarray, p: float) -> float:
    return math.fsum(probs * np.abs(values) ** p)


def moment_split_check(law_x: DiscreteLawInput, law_y: DiscreteLawInput, p: float) -> CheckResult:
    """
    E|X + Y|^p <= 2^{p-1} (E|X|^p + E|Y|^p) for independent finite laws,
    together with E|Y - EY|^p <= 2^p E|Y|^p

    Args:
        law_x: (values, probabilities) of X
        law_y: (values, probabilities) of Y
        p: Exponent, p > 2

    Returns:
        CheckResult of the main inequality; the second one sits in details and
        must hold as well
    """
    if not p > 2:
        raise InfeasibleParameterError(f"p must exceed 2, got {p}")
    xv, xp = _check_discrete("law_x", law_x)
    yv, yp = _check_discrete("law_y", law_y)

    sums = xv[:, None] + yv[None, :]
    weights = xp[:, None] * yp[None, :]
    lhs = math.fsum((weights * np.abs(sums) ** p).ravel())
    ex, ey = _abs_power_mean(xv, xp, p), _abs_power_mean(yv, yp, p)
    rhs = 2.0 ** (p - 1.0) * (ex + ey)

    mean_y = math.fsum(yp * yv)
    centred = CheckResult.compare("moment_split.centred", _abs_power_mean(yv - mean_y, yp, p), 2.0 ** p * ey)
    main = CheckResult.compare(
        "moment_split", lhs, rhs,
        {"law_x": [xv.tolist(), xp.tolist()], "law_y": [yv.tolist(), yp.tolist()], "p": p},
        details={"centred": centred.to_dict()},
    )
    main.holds = main.holds and centred.holds
    return main


def poly_from_exp_check(spec: DistributionSpec, t: float, q: float) -> CheckResult:
    """
    E|X|^q <= C t^{-q} q! with C = E e^{t|X|}

    Args:
        spec: Distribution spec with E e^{t|X|} finite
        t: Tilt, t > 0
        q: Order, q >= 2 (q! read as Gamma(q + 1))

    Returns:
        CheckResult
    """
    if not t > 0 or not q >= 2:
        raise InfeasibleParameterError(f"need t > 0 and q >= 2, got t={t}, q={q}")
    C = exp_abs_moment_eval(spec, t)
    if math.isinf(C.value):
        raise InfeasibleParameterError(f"E exp({t:g}|X|) diverges for {spec.label}")
    moment = abs_moment_eval(spec, q)
    log_factor = gammaln(q + 1.0) - q * math.log(t)
    rhs = C.value * math.exp(log_factor) if log_factor < 700 else math.inf
    error = moment.abs_error + (C.abs_error * math.exp(log_factor) if log_factor < 700 else 0.0)
    witness = {"spec": _spec_witness(spec), "t": t, "q": q, "C": C.value}
    return CheckResult.compare("poly_from_exp", moment.value, rhs, witness, error_bound=error)


def truncation_sum(x: float, q: float, n: int) -> float:
    """sum_{k=1}^n |x| 1{|x|^q >= k} / k^{1/q}, summed exactly term by term"""
    magnitude = abs(x)
    count = min(int(n), int(math.floor(magnitude ** q))) if magnitude > 0 else 0
    return math.fsum(magnitude * k ** (-1.0 / q) for k in range(1, count + 1))


def truncation_sum_check(x: float, q: float, n: int, corrected: bool = False) -> CheckResult:
    """
    sum_{k=1}^n |x| 1{|x|^q >= k} / k^{1/q} against |x|^q + 1

    The stated majorant |x|^q + 1 fails at some points, e.g. x = 2, q = 3,
    where the sum is about 10.55 > 9: comparing the partial sum of k^{-1/q}
    with its integral loses the factor q/(q - 1). It is therefore reported as
    not theorem-backed. corrected=True checks q/(q - 1) |x|^q + 1, which
    follows from sum_{k<=N} k^{-1/q} <= q/(q - 1) N^{1 - 1/q}.

    Args:
        x: Real number
        q: Exponent, q > 2
        n: Number of terms, n >= 1

    Returns:
        CheckResult
    """
    if not q > 2 or n < 1:
        raise InfeasibleParameterError(f"need q > 2 and n >= 1, got q={q}, n={n}")
    lhs = truncation_sum(x, q, n)
    power = abs(x) ** q
    rhs = (q / (q - 1.0)) * power + 1.0 if corrected else power + 1.0
    name = "truncation_sum.corrected" if corrected else "truncation_sum"
    return CheckResult.compare(name, lhs, rhs, {"x": x, "q": q, "n": n}, theorem_backed=corrected)


def epoch_bound_identity_checks(n_range: Sequence[int]) -> List[CheckResult]:
    """
    D(n-1) >= sqrt(d(n)) and D(n-1) <= d(n) in exact integer arithmetic

    Args:
        n_range: Epoch numbers, each >= 2

    Returns:
        Two CheckResults per n
    """
    results = []
    for n in n_range:
        if n < 2:
            raise InfeasibleParameterError(f"epoch identities need n >= 2, got {n}")
        D_prev = D_exact(n - 1)
        sqrt_d = 1 << (1 << (n - 1))
        results.append(CheckResult.compare("epoch.sqrt_d_le_D", sqrt_d, D_prev, {"n": n}))
        results.append(CheckResult.compare("epoch.D_le_d", D_prev, d_exact(n), {"n": n}))
    return results


def truncated_variance_check(spec: DistributionSpec, K: float) -> CheckResult:
    """
    Var X - E[X^2 1{|X| > K}] - (E[|X| 1{|X| > K}])^2 <= Var(X 1{|X| <= K})
    """
    if not K > 0:
        raise InfeasibleParameterError(f"K must be positive, got {K}")
    truncated = truncated_variance_eval(spec, K)
    tail_first = upper_tail_first(spec, K)
    lhs = spec.law.variance - upper_tail_second(spec, K) - tail_first ** 2
    return CheckResult.compare("truncated_variance", lhs, truncated.value,
                               {"spec": _spec_witness(spec), "K": K},
                               error_bound=2.0 * truncated.abs_error + 1e-12)


def variance_diff_check(spec: DistributionSpec, q: float, m: int, Cq: Optional[float] = None,
                        horizon: int = 10_000) -> CheckResult:
    """Weighted variance-difference sum against 4 C_q E[|X|^q 1{|X|^q > m}]"""
    bound = variance_diff_bound(spec, q, m, Cq, horizon)
    return CheckResult.compare("variance_diff", bound.lhs, bound.rhs,
                               {"spec": _spec_witness(spec), "q": q, "m": m, "horizon": horizon},
                               details=bound.to_dict())


def sub_gaussian_moment_check(sigma: float, q: float) -> CheckResult:
    """E|N(0, sigma^2)|^q <= q 2^{q/2} sigma^q Gamma(q/2)"""
    moment = abs_moment_eval(DistributionSpec.gaussian(sigma), q)
    return CheckResult.compare("sub_gaussian_moment", moment.value, sub_gaussian_moment_bound(q, sigma),
                               {"sigma": sigma, "q": q}, error_bound=moment.abs_error)
