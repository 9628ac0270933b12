"""
Regularity module

Sakhanenko and Bernstein parameters, the relations between the equivalent
regularity conditions, and sup-over-family profiles.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from config.settings import get_settings
from dist import DistributionSpec, exp_abs_moment

from .parameters import (
    BernsteinResult,
    SakhanenkoSolution,
    bernstein_parameter,
    bernstein_terms,
    sakhanenko_parameter,
    solve_sakhanenko,
    sub_gaussian_lambda,
    sub_gaussian_moment_bound,
    sub_gaussian_sigma,
    sub_gaussian_tilted_bound,
)
from .relations import RelationReport, RelationRow, relation_check, REPORT_COLUMNS
from .profiles import (
    FamilySweep,
    RefinedSup,
    SweepProfile,
    UniformMomentConditions,
    exp_tail_profile,
    refine_sup,
    uniform_moment_conditions,
    uniform_tail_profile,
)

logger = logging.getLogger(__name__)


@dataclass
class RegularityReport:
    """lambda(P), b(P), exponential-moment pair and solver residuals of one spec"""
    spec: DistributionSpec
    lambda_sak: float
    bernstein: float
    q_max_used: int
    heavy_tail: bool = False
    sub_gaussian_sigma: Optional[float] = None
    exp_pair: Optional[Dict[str, float]] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    bernstein_detail: Optional[BernsteinResult] = None
    relations: Optional[RelationReport] = None

    def to_dict(self) -> Dict:
        payload = {
            "spec": {"family": self.spec.family.value, "params": dict(self.spec.params)},
            "lambda_sak": self.lambda_sak,
            "heavy_tail": self.heavy_tail,
            "sub_gaussian_sigma": self.sub_gaussian_sigma,
            "bernstein": self.bernstein,
            "exp_pair": self.exp_pair,
            "residuals": self.residuals,
            "q_max_used": self.q_max_used,
        }
        if self.bernstein_detail is not None:
            payload["bernstein_scan"] = self.bernstein_detail.to_dict()
        if self.relations is not None:
            payload["relations"] = self.relations.to_dict()
        return payload


def regularity_report(spec: DistributionSpec, tol: Optional[float] = None, q_max: Optional[int] = None,
                      ubar_sigma: Optional[float] = None, t: Optional[float] = None) -> RegularityReport:
    """
    Computes the full regularity report of a spec

    Args:
        spec: Distribution spec
        tol: Sakhanenko bisection tolerance
        q_max: Bernstein scan limit
        ubar_sigma: When given, relation_check runs with this variance floor
        t: Tilt of the exponential-moment pair (default lambda(P)/2)

    Returns:
        RegularityReport
    """
    q_max = get_settings().BERNSTEIN_Q_MAX if q_max is None else q_max
    sak = solve_sakhanenko(spec, tol)
    bern = bernstein_terms(spec, q_max)
    report = RegularityReport(
        spec=spec,
        lambda_sak=sak.value,
        bernstein=bern.value,
        q_max_used=q_max,
        heavy_tail=sak.heavy_tail,
        sub_gaussian_sigma=sub_gaussian_sigma(spec),
        residuals={"sakhanenko": sak.residual, "sakhanenko_bracket": sak.upper - sak.value},
        bernstein_detail=bern,
    )
    if not sak.heavy_tail:
        t_pair = sak.value / 2.0 if t is None else t
        report.exp_pair = {"t": t_pair, "C": exp_abs_moment(spec, t_pair)}
    if ubar_sigma is not None:
        if sak.heavy_tail:
            logger.warning(f"⚠️ {spec.label}: heavy tail, relation checks skipped")
        else:
            report.relations = relation_check(spec, ubar_sigma, t=t, q_max=q_max, tol=tol,
                                              sakhanenko=sak, bernstein=bern)
    return report


__all__ = [
    "BernsteinResult",
    "SakhanenkoSolution",
    "RegularityReport",
    "regularity_report",
    "bernstein_parameter",
    "bernstein_terms",
    "sakhanenko_parameter",
    "solve_sakhanenko",
    "sub_gaussian_lambda",
    "sub_gaussian_moment_bound",
    "sub_gaussian_sigma",
    "sub_gaussian_tilted_bound",
    "RelationReport",
    "RelationRow",
    "relation_check",
    "REPORT_COLUMNS",
    "FamilySweep",
    "RefinedSup",
    "SweepProfile",
    "UniformMomentConditions",
    "exp_tail_profile",
    "refine_sup",
    "uniform_moment_conditions",
    "uniform_tail_profile",
]
