"""
Exponential-moment case: the epoch series bound on

    P( sup_{k >= m} |Lambda_k / log k| >= z )
        <= 2 sum_{n >= n_m} (1 + lam sqrt(d(n)) sigma) exp(-c lam z 2^n log 2)

evaluated term by term in log space. With kappa = c lam z - 1/2 the terms
behave like 2^{-kappa 2^n}, so the series diverges iff kappa <= 0; otherwise
summation stops once the geometric tail majorant is negligible.
"""

import math
import logging
from typing import Dict, Iterable, List, Optional

import mpmath
import numpy as np
from scipy.special import logsumexp

from bounds.epochs import LOG2, epoch_index
from bounds.value import BoundValue, resolve_constant
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

TAIL_RELATIVE_TOL = 1e-16
MAX_EPOCHS = 1000
LOG_PREFACTOR = math.log(2.0)


def _require_positive(**values: float):
    for name, value in values.items():
        if not value > 0 or not math.isfinite(value):
            raise InfeasibleParameterError(f"{name} must be positive and finite, got {value}")


def epoch_log_term(n: int, lam: float, sigma: float, z: float, c: float) -> float:
    """log[(1 + lam sigma 2^{2^{n-1}}) 2^{-c lam z 2^n}]"""
    half = math.ldexp(1.0, n - 1)
    return float(np.logaddexp(0.0, math.log(lam * sigma) + half * LOG2)) - c * lam * z * 2.0 * half * LOG2


def _log_tail_majorant(N: int, lam: float, sigma: float, kappa: float) -> float:
    """
    log of an upper bound on sum_{n > N} of the epoch terms

    Each term is at most (1 + lam sigma) r_n with r_n = 2^{-kappa 2^n}, and
    sum_{n > N} r_n <= r^2 / (1 - r) with r = r_N.
    """
    log_r = -kappa * math.ldexp(1.0, N) * LOG2
    return math.log1p(lam * sigma) + 2.0 * log_r - math.log(-math.expm1(log_r))


def kmt_exponential_bound(lam: float, sigma: float, z: float, m: int, c: Optional[float] = None,
                          lambda_bar: Optional[float] = None) -> BoundValue:
    """
    Evaluates the epoch series bound

    Args:
        lam: lambda, 0 < lam (< lambda_bar when given)
        sigma: Standard deviation
        z: Threshold
        m: Start index, m >= 4
        c: Universal constant (None uses the configured non-rigorous default)
        lambda_bar: Sakhanenko parameter that lam must stay strictly below

    Returns:
        BoundValue; divergent when c lam z <= 1/2
    """
    _require_positive(lam=lam, sigma=sigma, z=z)
    if lambda_bar is not None and not lam < lambda_bar:
        raise InfeasibleParameterError(f"lambda={lam:g} must be strictly below the Sakhanenko parameter {lambda_bar:g}")
    warnings: List[str] = []
    c = resolve_constant(c, "c", warnings)
    n_m = epoch_index(m)
    params = {"lambda": lam, "sigma": sigma, "z": z, "m": int(m), "c": c, "n_m": n_m}

    kappa = c * lam * z - 0.5
    if kappa <= 0.0:
        logger.warning(f"⚠️ c*lambda*z = {c * lam * z:.6g} <= 1/2, epoch series diverges")
        return BoundValue.divergent_value(warnings=warnings, params=params)

    log_terms: List[float] = []
    log_tail = math.inf
    n = n_m
    while n < n_m + MAX_EPOCHS:
        log_terms.append(epoch_log_term(n, lam, sigma, z, c))
        log_tail = _log_tail_majorant(n, lam, sigma, kappa)
        if log_tail < math.log(TAIL_RELATIVE_TOL) + float(logsumexp(log_terms)):
            break
        n += 1
    else:
        warnings.append(f"tail majorant still above tolerance after {MAX_EPOCHS} epochs")

    truncation = math.exp(LOG_PREFACTOR + log_tail) if log_tail < 709.0 else math.inf
    value = BoundValue.from_terms(log_terms, LOG_PREFACTOR, truncation, warnings=warnings, params=params)
    logger.debug(f"epoch series: {value.terms_used} terms from n_m={n_m}, log value {value.log_value:.6g}")
    if value.vacuous:
        logger.warning(f"⚠️ bound value {value.value:.6g} >= 1 is vacuous")
    return value


def uniform_threshold(lambda_lower: float, c: float, delta: float) -> float:
    """C_delta = (1/2 + delta) / (c lambda_lower)"""
    return (0.5 + delta) / (c * lambda_lower)


def kmt_exponential_bound_uniform(lambda_lower: float, sigma_upper: float, m: int,
                                  c: Optional[float] = None, delta: float = 0.5,
                                  lambda_bar: Optional[float] = None) -> BoundValue:
    """
    Distribution-uniform form of the epoch bound

    At z = C_delta every epoch term becomes
    (1 + lambda_lower sqrt(d(n)) sigma_upper) / d(n)^{1/2 + delta}, a majorant
    valid for every law with Sakhanenko parameter >= lambda_lower and standard
    deviation <= sigma_upper.

    Args:
        lambda_lower: Uniform lower bound on the Sakhanenko parameter
        sigma_upper: Uniform upper bound on the standard deviation
        m: Start index, m >= 4
        c: Universal constant
        delta: Positive margin
        lambda_bar: Sakhanenko parameter that lambda_lower must stay strictly below

    Returns:
        BoundValue with params z (= C_delta) and event_threshold (= 4 C_delta)
    """
    _require_positive(lambda_lower=lambda_lower, sigma_upper=sigma_upper, delta=delta)
    warnings: List[str] = []
    c = resolve_constant(c, "c", warnings)
    z = uniform_threshold(lambda_lower, c, delta)
    value = kmt_exponential_bound(lambda_lower, sigma_upper, z, m, c, lambda_bar)
    value.warnings = warnings + value.warnings
    value.params.update({"delta": delta, "event_threshold": 4.0 * z})
    return value


def naive_exponential_series(lam: float, sigma: float, z: float, m: int, c: float,
                             terms: int = 40, prec: int = 200) -> float:
    """
    Direct summation of the first ``terms`` epoch terms in ``prec``-bit arithmetic

    Reference evaluator for the log-space summation.
    """
    _require_positive(lam=lam, sigma=sigma, z=z, c=c)
    n_m = epoch_index(m)
    with mpmath.workprec(prec):
        lam_, sigma_, z_, c_ = (mpmath.mpf(v) for v in (lam, sigma, z, c))
        total = mpmath.mpf(0)
        for n in range(n_m, n_m + terms):
            sqrt_d = mpmath.ldexp(mpmath.mpf(1), 2 ** (n - 1))
            decay = mpmath.power(2, -c_ * lam_ * z_ * 2 ** n)
            total += (1 + lam_ * sqrt_d * sigma_) * decay
        return float(2 * total)


def sakhanenko_exp_mgf_bound(lam: float, n: int, sigma: float) -> float:
    """1 + lam sqrt(n) sigma, the bound on E exp(c lam max_k |Lambda_k|) over n steps"""
    _require_positive(lam=lam, sigma=sigma)
    if n < 1:
        raise InfeasibleParameterError(f"n must be >= 1, got {n}")
    return 1.0 + lam * math.sqrt(n) * sigma


def sakhanenko_exp_tail_bound(lam: float, n: int, sigma: float, z: float, c: Optional[float] = None) -> float:
    """(1 + lam sqrt(n) sigma) exp(-c lam z), the Markov tail of the coupled maximum"""
    _require_positive(z=z)
    c = resolve_constant(c, "c", [])
    return sakhanenko_exp_mgf_bound(lam, n, sigma) * math.exp(-c * lam * z)


def exponential_bound_series(lam: float, sigma: float, z_grid: Iterable[float], m_grid: Iterable[int],
                             c: Optional[float] = None, lambda_bar: Optional[float] = None) -> List[BoundValue]:
    """One BoundValue per (m, z) grid point, m outer and z inner"""
    values = []
    for m in m_grid:
        for z in z_grid:
            values.append(kmt_exponential_bound(lam, sigma, float(z), int(m), c, lambda_bar))
    return values


def series_rows(values: List[BoundValue]) -> List[Dict]:
    return [v.to_row() for v in values]
