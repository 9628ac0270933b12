"""
Numeric checks of the relations between the four equivalent regularity
conditions: bounded exponential moment (t, C), uniformly integrable
exponential moment, bounded Bernstein parameter, Sakhanenko regularity.

Edge names follow the relation they check:
    a  (t, C) -> integrable exponential moment for t* < t (profile only)
    b  (t, C) -> b <= 2 C ubar_sigma min{t ubar_sigma, 1}^{-3}
    c  b      -> Sakhanenko regular with lambda = (7 b)^{-1}
    d  lambda -> b <= 1 / lambda
    e  lambda -> E e^{lambda |X|} <= lambda^{-3} + e^{lambda}
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import pandas as pd
from scipy.special import gammaln

from config.settings import get_settings
from dist import DistributionSpec, abs_moment, exp_abs_moment, exp_tail_moment, tilted_third
from regularity.parameters import (
    BernsteinResult,
    SakhanenkoSolution,
    bernstein_terms,
    solve_sakhanenko,
)
from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
PROFILE = "profile"
INFO = "info"

SLACK_TOL = 1e-9
PER_Q_ROWS = 20
REPORT_COLUMNS = ["quantity", "value", "slack", "q_or_m", "status"]


@dataclass
class RelationRow:
    """One line of a relation report"""
    quantity: str
    value: float
    slack: Optional[float] = None
    q_or_m: Optional[float] = None
    status: str = INFO

    def to_dict(self) -> Dict:
        return {
            "quantity": self.quantity,
            "value": self.value,
            "slack": self.slack,
            "q_or_m": self.q_or_m,
            "status": self.status,
        }


def _verdict(slack: float) -> str:
    return PASS if slack >= -SLACK_TOL else FAIL


@dataclass
class RelationReport:
    """Per-edge pass/fail with slack values"""
    spec: DistributionSpec
    ubar_sigma: float
    t: float
    C: float
    rows: List[RelationRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.rows)

    def edge(self, quantity: str) -> RelationRow:
        for row in self.rows:
            if row.quantity == quantity:
                return row
        raise KeyError(quantity)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.rows], columns=REPORT_COLUMNS)

    def to_dict(self) -> Dict:
        return {
            "spec": {"family": self.spec.family.value, "params": dict(self.spec.params)},
            "ubar_sigma": self.ubar_sigma,
            "exp_pair": {"t": self.t, "C": self.C},
            "passed": self.passed,
            "rows": [r.to_dict() for r in self.rows],
        }


def _bernstein_rows(prefix: str, b_bar: float, spec: DistributionSpec, var: float,
                    bern: BernsteinResult) -> List[RelationRow]:
    """E|X|^q <= (q!/2) b_bar^{q-2} Var X for small q, then the full scan in b units"""
    rows = []
    for q in range(3, min(bern.q_max, PER_Q_ROWS) + 1):
        lhs = abs_moment(spec, q)
        log_rhs = gammaln(q + 1.0) - math.log(2.0) + (q - 2) * math.log(b_bar) + math.log(var)
        rhs = math.exp(log_rhs) if log_rhs < 709 else math.inf
        slack = rhs - lhs
        ok = slack >= -SLACK_TOL * max(1.0, rhs)
        rows.append(RelationRow(f"{prefix}.bernstein_q", lhs, slack, q, PASS if ok else FAIL))
    slack = b_bar - bern.value
    rows.append(RelationRow(f"{prefix}.b_bar", b_bar, slack, bern.q_max, _verdict(slack)))
    return rows


def relation_check(spec: DistributionSpec, ubar_sigma: float, t: Optional[float] = None,
                   q_max: Optional[int] = None, tol: Optional[float] = None,
                   t_star_fractions: Sequence[float] = (0.25, 0.5, 0.75),
                   k_grid: Sequence[float] = (10.0, 1e2, 1e4, 1e8),
                   sakhanenko: Optional[SakhanenkoSolution] = None,
                   bernstein: Optional[BernsteinResult] = None) -> RelationReport:
    """
    Checks relations (a)-(e) for one spec

    Args:
        spec: Distribution spec with a finite exponential moment
        ubar_sigma: Lower bound on the standard deviation, ubar_sigma^2 <= Var X
        t: Tilt of the exponential-moment pair (default lambda(P)/2)
        q_max: Bernstein scan limit
        tol: Sakhanenko bisection tolerance
        t_star_fractions: t* / t values of the relation (a) profile
        k_grid: Thresholds of the relation (a) profile
        sakhanenko: Precomputed solution (optional)
        bernstein: Precomputed Bernstein scan (optional)

    Returns:
        RelationReport

    Raises:
        InfeasibleParameterError: ubar_sigma too large, no exponential moment,
            or an infinite E e^{t|X|}
    """
    law = spec.law
    var = law.variance
    if ubar_sigma <= 0 or ubar_sigma ** 2 > var * (1.0 + 1e-12):
        raise InfeasibleParameterError(f"ubar_sigma^2 = {ubar_sigma ** 2:g} exceeds Var X = {var:g}")
    if law.exp_radius <= 0:
        raise InfeasibleParameterError(f"{spec.label} has no finite exponential moment")

    q_max = get_settings().BERNSTEIN_Q_MAX if q_max is None else q_max
    sak = sakhanenko or solve_sakhanenko(spec, tol)
    bern = bernstein or bernstein_terms(spec, q_max)
    lam = sak.value
    t = lam / 2.0 if t is None else t
    if t <= 0:
        raise InfeasibleParameterError(f"tilt must be positive, got {t}")
    C = exp_abs_moment(spec, t)
    if math.isinf(C):
        raise InfeasibleParameterError(f"E exp(t|X|) diverges at t={t:g}")

    report = RelationReport(spec=spec, ubar_sigma=ubar_sigma, t=t, C=C)
    rows = report.rows
    rows.append(RelationRow("lambda_sak", lam, sak.residual, None, INFO))
    rows.append(RelationRow("bernstein", bern.value, None, bern.argmax_q, INFO))
    rows.append(RelationRow("exp_pair.t", t, None, None, INFO))
    rows.append(RelationRow("exp_pair.C", C, None, None, INFO))

    # (a): tail profile only, the limit statement is not decided on a grid
    for fraction in t_star_fractions:
        t_star = fraction * t
        for K in k_grid:
            rows.append(RelationRow(f"a.exp_tail[t*={t_star:.6g}]", exp_tail_moment(spec, t_star, K), None, K, PROFILE))

    # (b)
    b_from_exp = 2.0 * C * ubar_sigma * min(t * ubar_sigma, 1.0) ** -3
    rows.extend(_bernstein_rows("b", b_from_exp, spec, var, bern))

    # (c)
    lam_from_b = 1.0 / (7.0 * bern.value)
    lhs = lam_from_b * tilted_third(spec, lam_from_b)
    rows.append(RelationRow("c.lambda_from_b", lam_from_b, var - lhs, None, _verdict(var - lhs)))

    # (d)
    rows.extend(_bernstein_rows("d", 1.0 / lam, spec, var, bern))

    # (e)
    C_from_lam = lam ** -3 + math.exp(lam)
    mgf = exp_abs_moment(spec, lam)
    rows.append(RelationRow("e.C_from_lambda", C_from_lam, C_from_lam - mgf, None, _verdict(C_from_lam - mgf)))

    # Var X <= lambda^{-2}
    bound = lam ** -2
    rows.append(RelationRow("variance_bound", bound, bound - var, None, _verdict(bound - var)))

    status = "✅" if report.passed else "❌"
    logger.info(f"{status} relations for {spec.label}: "
                f"{sum(r.status == PASS for r in rows)} pass, {sum(r.status == FAIL for r in rows)} fail")
    return report
