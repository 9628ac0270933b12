"""
Sup-over-family profiles

A finite list of specs stands in for an arbitrary index set; every profile
is labeled as a finite-sweep surrogate. Sweeps can be refined along one
parameter with a bounded golden-section search.
"""

import math
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from dist import DistributionSpec, abs_moment, exp_tail_moment, tail_moment
from utils.exceptions import InfeasibleParameterError, InvalidSpecError

logger = logging.getLogger(__name__)

SURROGATE_LABEL = "finite sweep surrogate"


@dataclass
class FamilySweep:
    """Ordered list of specs plus the m- and K-grids profiles are evaluated on"""
    specs: List[DistributionSpec]
    m_grid: List[float] = field(default_factory=lambda: [0.0, 1.0, 10.0, 100.0, 1000.0])
    k_grid: List[float] = field(default_factory=lambda: [1.0, 10.0, 100.0, 1000.0])

    def __post_init__(self):
        if not self.specs:
            raise InvalidSpecError("a family sweep needs at least one spec")
        for spec in self.specs:
            if not isinstance(spec, DistributionSpec):
                raise InvalidSpecError(f"sweep entry is not a DistributionSpec: {spec!r}")
        self.m_grid = sorted(float(m) for m in self.m_grid)
        self.k_grid = sorted(float(k) for k in self.k_grid)

    @classmethod
    def from_dict(cls, payload: Dict) -> "FamilySweep":
        specs = [DistributionSpec.from_dict(s) for s in payload.get("specs", [])]
        kwargs = {}
        if "m_grid" in payload:
            kwargs["m_grid"] = payload["m_grid"]
        if "k_grid" in payload:
            kwargs["k_grid"] = payload["k_grid"]
        return cls(specs=specs, **kwargs)

    def to_dict(self) -> Dict:
        return {
            "specs": [{"family": s.family.value, "params": dict(s.params)} for s in self.specs],
            "m_grid": self.m_grid,
            "k_grid": self.k_grid,
        }


@dataclass
class SweepProfile:
    """grid point -> sup over specs of a functional"""
    functional: str
    grid: List[float]
    values: List[float]
    argmax: List[Optional[str]]
    threshold: Optional[float] = None
    label: str = SURROGATE_LABEL

    @property
    def below_threshold_at(self) -> Optional[float]:
        """First grid point where the profile is <= threshold"""
        if self.threshold is None:
            return None
        for g, v in zip(self.grid, self.values):
            if v <= self.threshold:
                return g
        return None

    @property
    def is_monotone(self) -> bool:
        return all(b <= a for a, b in zip(self.values[:-1], self.values[1:]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"grid": self.grid, "sup_value": self.values, "argmax": self.argmax})

    def to_dict(self) -> Dict:
        return {
            "functional": self.functional,
            "grid": self.grid,
            "values": self.values,
            "argmax": self.argmax,
            "threshold": self.threshold,
            "below_threshold_at": self.below_threshold_at,
            "monotone": self.is_monotone,
            "label": self.label,
        }


def _spec_row(spec: DistributionSpec, func: Callable[[DistributionSpec, float], float],
              grid: Sequence[float]) -> List[float]:
    return [func(spec, g) for g in grid]


def _ordered_sup(sweep: FamilySweep, func, grid: Sequence[float], workers: int) -> Tuple[List[float], List[Optional[str]]]:
    if workers > 1 and len(sweep.specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(partial(_spec_row, func=func, grid=grid), sweep.specs))
    else:
        rows = [_spec_row(spec, func, grid) for spec in sweep.specs]
    values, argmax = [], []
    for j in range(len(grid)):
        best, best_label = -math.inf, None
        # ties keep the first spec in sweep order
        for spec, row in zip(sweep.specs, rows):
            if row[j] > best:
                best, best_label = row[j], spec.label
        values.append(best)
        argmax.append(best_label)
    return values, argmax


def _tail_at(spec: DistributionSpec, m: float, q: float) -> float:
    return tail_moment(spec, q, m)


def _exp_tail_at(spec: DistributionSpec, K: float, t: float) -> float:
    return exp_tail_moment(spec, t, K)


def uniform_tail_profile(sweep: FamilySweep, q: float, threshold: Optional[float] = None,
                         workers: int = 1) -> SweepProfile:
    """
    m -> sup over specs of E[|X|^q 1{|X|^q > m}]

    Args:
        sweep: Family sweep
        q: Moment order, q > 2
        threshold: Optional level; the profile reports the first m below it
        workers: Processes used across specs (reduction order is the sweep order)

    Returns:
        SweepProfile over sweep.m_grid
    """
    if q <= 2:
        raise InfeasibleParameterError(f"uniform_tail_profile needs q > 2, got {q}")
    values, argmax = _ordered_sup(sweep, partial(_tail_at, q=q), sweep.m_grid, workers)
    profile = SweepProfile(f"tail_moment[q={q:g}]", list(sweep.m_grid), values, argmax, threshold)
    logger.info(f"📊 uniform tail profile q={q:g} over {len(sweep.specs)} specs ({SURROGATE_LABEL})")
    return profile


def exp_tail_profile(sweep: FamilySweep, t: float, threshold: Optional[float] = None,
                     workers: int = 1) -> SweepProfile:
    """K -> sup over specs of E[e^{t|X|} 1{e^{t|X|} >= K}]"""
    if t <= 0:
        raise InfeasibleParameterError(f"exp_tail_profile needs t > 0, got {t}")
    values, argmax = _ordered_sup(sweep, partial(_exp_tail_at, t=t), sweep.k_grid, workers)
    return SweepProfile(f"exp_tail_moment[t={t:g}]", list(sweep.k_grid), values, argmax, threshold)


@dataclass
class RefinedSup:
    """Golden-section maximiser of a functional along one family parameter"""
    param: str
    argmax: float
    value: float
    evaluations: int
    label: str = SURROGATE_LABEL


def refine_sup(base: DistributionSpec, param: str, interval: Tuple[float, float],
               functional: Callable[[DistributionSpec], float], xatol: float = 1e-8) -> RefinedSup:
    """
    Maximises functional(spec) over spec.params[param] in a closed interval

    The interval endpoints are evaluated as well, so monotone functionals
    return the better endpoint.

    Args:
        base: Spec whose other parameters stay fixed
        param: Name of the free parameter
        interval: (low, high) with 0 < low < high
        functional: spec -> real
        xatol: Absolute tolerance on the parameter

    Returns:
        RefinedSup
    """
    if param not in base.params:
        raise InvalidSpecError(f"{base.family.value} has no parameter '{param}'")
    low, high = interval
    if not 0 < low < high:
        raise InfeasibleParameterError(f"invalid refinement interval {interval}")

    def make(x: float) -> DistributionSpec:
        params = dict(base.params)
        params[param] = float(x)
        return DistributionSpec.from_dict({"family": base.family.value, "params": params})

    def objective(x: float) -> float:
        value = functional(make(x))
        return -value if math.isfinite(value) else -1e300

    result = minimize_scalar(objective, bounds=(low, high), method="bounded", options={"xatol": xatol})
    candidates = [(float(result.x), -float(result.fun))]
    for x in (low, high):
        candidates.append((x, -objective(x)))
    best_x, best_value = max(candidates, key=lambda c: c[1])
    best_value = functional(make(best_x))
    return RefinedSup(param=param, argmax=best_x, value=best_value, evaluations=int(result.nfev) + 2)


@dataclass
class UniformMomentConditions:
    """Uniform moment-sum conditions of the power case over a sweep"""
    q: float
    horizon: int
    sup_sum: float
    sup_tail: List[float]
    tail_vanishes: bool
    label: str = SURROGATE_LABEL

    def to_dict(self) -> Dict:
        return {
            "q": self.q,
            "horizon": self.horizon,
            "sup_sum": self.sup_sum,
            "sup_tail": self.sup_tail,
            "tail_vanishes": self.tail_vanishes,
            "label": self.label,
        }


def uniform_moment_conditions(sweep: FamilySweep, a: Sequence[float], q: float,
                              tail_tol: float = 1e-6) -> UniformMomentConditions:
    """
    sup_spec sum_k E|X|^q / a_k^q and j -> sup_spec sum_{k>=j} E|X|^q / a_k^q

    Args:
        sweep: Family sweep
        a: Positive nondecreasing weights a_1..a_horizon
        q: Moment order, q > 2
        tail_tol: Level the sup tail must reach by the horizon

    Returns:
        UniformMomentConditions
    """
    a = np.asarray(a, dtype=float)
    if q <= 2:
        raise InfeasibleParameterError(f"q must exceed 2, got {q}")
    if a.size == 0 or np.any(a <= 0) or np.any(np.diff(a) < 0):
        raise InfeasibleParameterError("weights must be positive and nondecreasing")
    sup_moment = max(abs_moment(spec, q) for spec in sweep.specs)
    weights = a ** -q
    tails = np.cumsum(weights[::-1])[::-1]
    sup_tail = (sup_moment * tails).tolist() if math.isfinite(sup_moment) else [math.inf] * a.size
    sup_sum = sup_tail[0]
    return UniformMomentConditions(
        q=q,
        horizon=int(a.size),
        sup_sum=sup_sum,
        sup_tail=sup_tail,
        tail_vanishes=bool(math.isfinite(sup_sum) and sup_tail[-1] <= tail_tol),
    )
