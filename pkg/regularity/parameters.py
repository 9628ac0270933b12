"""
Sakhanenko and Bernstein parameters, sub-Gaussian constants
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.special import gamma, gammaln

from config.settings import get_settings
from dist import DistributionSpec, log_abs_moment, tilted_third
from utils.exceptions import InfeasibleParameterError, VacuousConstantError

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
MAX_BRACKET_DOUBLINGS = 2000


@dataclass
class SakhanenkoSolution:
    """Bisection certificate for lambda(P) = sup{lam : lam E|X|^3 e^{lam|X|} <= Var X}"""
    value: float
    upper: float
    residual: float
    heavy_tail: bool = False
    iterations: int = 0

    def to_dict(self) -> Dict:
        return {
            "lambda_sak": self.value,
            "bracket_upper": self.upper,
            "residual": self.residual,
            "heavy_tail": self.heavy_tail,
            "iterations": self.iterations,
        }


def _h(spec: DistributionSpec, lam: float, var: float) -> float:
    if lam == 0.0:
        return -var
    tilted = tilted_third(spec, lam)
    return math.inf if math.isinf(tilted) else lam * tilted - var


def solve_sakhanenko(spec: DistributionSpec, tol: Optional[float] = None) -> SakhanenkoSolution:
    """
    Bisection for the Sakhanenko parameter

    h(lam) = lam * tilted_third(lam) - Var X is continuous and increasing with
    h(0) < 0. The bracket starts at [0, 1] and its upper end doubles until
    h > 0 (it is clamped to the exponential radius, where h = +inf).

    Args:
        spec: Distribution spec
        tol: Relative tolerance; the result lo satisfies h(lo) <= 0 < h(hi)
            with hi <= lo (1 + tol) + tol

    Returns:
        SakhanenkoSolution (value 0 with heavy_tail set when no exponential moment exists)
    """
    tol = get_settings().SAKHANENKO_TOL if tol is None else tol
    if tol <= 0:
        raise InfeasibleParameterError(f"tolerance must be positive, got {tol}")
    law = spec.law
    var = law.variance
    if law.exp_radius <= 0.0:
        logger.warning(f"⚠️ {spec.label}: no exponential moment, Sakhanenko parameter is 0")
        return SakhanenkoSolution(0.0, 0.0, -var, heavy_tail=True)

    lo, hi = 0.0, min(1.0, law.exp_radius)
    doublings = 0
    while _h(spec, hi, var) <= 0.0:
        lo = hi
        hi = min(2.0 * hi, law.exp_radius)
        doublings += 1
        if doublings > MAX_BRACKET_DOUBLINGS:
            raise InfeasibleParameterError(f"{spec.label}: could not bracket the Sakhanenko parameter")

    iterations = 0
    while hi > lo * (1.0 + tol) + tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _h(spec, mid, var) <= 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    residual = _h(spec, lo, var)
    logger.debug(f"{spec.label}: lambda in [{lo:.15g}, {hi:.15g}] after {iterations} bisections")
    return SakhanenkoSolution(lo, hi, residual, iterations=iterations)


def sakhanenko_parameter(spec: DistributionSpec, tol: Optional[float] = None) -> float:
    """Sakhanenko parameter lambda(P) (0 for laws without an exponential moment)"""
    return solve_sakhanenko(spec, tol).value


@dataclass
class BernsteinResult:
    """b(P) = max_q (2 E|X|^q / (q! Var X))^{1/(q-2)} over 3 <= q <= q_max"""
    value: float
    argmax_q: Optional[int]
    q_max: int
    tail_margin: Optional[float] = None
    max_ratio: Optional[float] = None
    divergent_q: Optional[int] = None
    log_terms: List[float] = field(default_factory=list, repr=False)

    def term(self, q: int) -> float:
        return math.exp(self.log_terms[q - 3])

    def to_dict(self) -> Dict:
        return {
            "bernstein": self.value,
            "argmax_q": self.argmax_q,
            "q_max": self.q_max,
            "tail_margin": self.tail_margin,
            "max_ratio": self.max_ratio,
            "divergent_q": self.divergent_q,
        }


def bernstein_terms(spec: DistributionSpec, q_max: int) -> BernsteinResult:
    """
    Scans the Bernstein terms in log space

    tail_margin is the ratio of the last two terms, max_ratio the ratio of
    the last term to the maximum; both make the q_max truncation auditable.

    Args:
        spec: Distribution spec
        q_max: Largest integer order scanned, >= 3

    Returns:
        BernsteinResult (value +inf and divergent_q set when a moment diverges)
    """
    if q_max < 3:
        raise InfeasibleParameterError(f"q_max must be >= 3, got {q_max}")
    log_var = math.log(spec.law.variance)
    log_terms = []
    for q in range(3, q_max + 1):
        lm = log_abs_moment(spec, q)
        if math.isinf(lm):
            logger.warning(f"⚠️ {spec.label}: E|X|^{q} diverges, Bernstein parameter is +inf")
            return BernsteinResult(math.inf, None, q_max, divergent_q=q, log_terms=log_terms)
        log_terms.append((math.log(2.0) + lm - gammaln(q + 1.0) - log_var) / (q - 2.0))
    terms = np.asarray(log_terms)
    best = int(np.argmax(terms))
    tail_margin = math.exp(terms[-1] - terms[-2]) if len(terms) > 1 else None
    max_ratio = math.exp(terms[-1] - terms[best])
    return BernsteinResult(
        value=math.exp(terms[best]),
        argmax_q=best + 3,
        q_max=q_max,
        tail_margin=tail_margin,
        max_ratio=max_ratio,
        log_terms=log_terms,
    )


def bernstein_parameter(spec: DistributionSpec, q_max: Optional[int] = None) -> float:
    """Bernstein parameter b(P), +inf when a required moment diverges"""
    q_max = get_settings().BERNSTEIN_Q_MAX if q_max is None else q_max
    return bernstein_terms(spec, q_max).value


def sub_gaussian_lambda(sigma: float, ubar_sigma: float) -> float:
    """
    Sakhanenko regularity constant of a sigma-sub-Gaussian class

    lambda = sigma^{-1} sqrt(log(ubar_sigma^2 / (8 sqrt(3) sigma^3)))

    Args:
        sigma: Sub-Gaussian parameter
        ubar_sigma: Lower bound on the standard deviation

    Returns:
        Positive constant

    Raises:
        VacuousConstantError: when the log argument is <= 1
    """
    if sigma <= 0 or ubar_sigma <= 0:
        raise InfeasibleParameterError("sigma and ubar_sigma must be positive")
    ratio = ubar_sigma ** 2 / (8.0 * SQRT3 * sigma ** 3)
    if ratio <= 1.0:
        raise VacuousConstantError(
            f"ubar_sigma^2/(8 sqrt(3) sigma^3) = {ratio:.6g} <= 1, no positive constant exists")
    return math.sqrt(math.log(ratio)) / sigma


def sub_gaussian_moment_bound(q: float, sigma: float) -> float:
    """q 2^{q/2} sigma^q Gamma(q/2), a bound on E|X|^q for sigma-sub-Gaussian X"""
    if q <= 0 or sigma <= 0:
        raise InfeasibleParameterError("q and sigma must be positive")
    return q * 2.0 ** (q / 2.0) * sigma ** q * float(gamma(q / 2.0))


def sub_gaussian_tilted_bound(sigma: float, lam: float) -> float:
    """8 sqrt(3) sigma^3 e^{sigma^2 lam^2}, a bound on E|X|^3 e^{lam|X|} for sigma-sub-Gaussian X"""
    if sigma <= 0 or lam < 0:
        raise InfeasibleParameterError("sigma must be positive and lambda nonnegative")
    return 8.0 * SQRT3 * sigma ** 3 * math.exp(sigma ** 2 * lam ** 2)


def sub_gaussian_sigma(spec: DistributionSpec) -> Optional[float]:
    """
    A sub-Gaussian parameter for the distribution, when the family has one

    Gaussian laws use their own sigma; bounded laws on [a, b] are
    (b - a)/2-sub-Gaussian. Laplace and Pareto laws are not sub-Gaussian.

    Args:
        spec: Distribution spec

    Returns:
        sigma or None
    """
    law = spec.law
    if spec.family.value == "gaussian":
        return law.sigma
    if math.isfinite(law.support_bound):
        if law.discrete:
            return float(law.values.max() - law.values.min()) / 2.0
        return law.support_bound
    return None
