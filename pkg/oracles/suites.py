"""
Randomized check batteries and JSON batch mode

Every check family draws from its own stream make_rng(mix_seed(seed, stream)),
so adding cases to one battery never shifts the inputs of another.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np

from bounds import TailBound, block_mass, block_partition, closed_form_nm, epoch_index, D_exact
from dist import LIGHT_TAIL_FAMILIES, DistributionSpec, Family, make_rng
from oracles.checks import (
    CheckResult,
    epoch_bound_identity_checks,
    maximal_weighted_check,
    moment_split_check,
    poly_from_exp_check,
    sub_gaussian_moment_check,
    truncated_variance_check,
    truncation_sum_check,
    variance_diff_check,
)
from utils.exceptions import InvalidSpecError
from utils.helpers import mix_seed

logger = logging.getLogger(__name__)

EPOCH_M_MAX = 10 ** 6
BLOCK_MAX_LENGTH = 10 ** 4
MAX_FAILURES_KEPT = 20

# stream numbers of the randomized batteries
STREAMS = {
    "maximal_weighted": 1,
    "moment_split": 2,
    "poly_from_exp": 3,
    "truncation_sum": 4,
    "truncated_variance": 5,
    "sub_gaussian_moment": 6,
    "block_partition": 7,
}


@dataclass
class SuiteReport:
    """Counts per check name, the failing witnesses and informational results"""
    name: str
    seed: Optional[int] = None
    counts: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)
    informational: List[Dict[str, Any]] = field(default_factory=list)
    violations: int = 0
    results: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    @property
    def cases(self) -> int:
        return sum(entry["cases"] for entry in self.counts.values())

    def record(self, result: CheckResult):
        if not result.theorem_backed:
            self.informational.append(result.to_dict())
            return
        entry = self.counts.setdefault(result.name, {"cases": 0, "violations": 0, "min_slack": math.inf})
        entry["cases"] += 1
        entry["min_slack"] = min(entry["min_slack"], result.slack)
        if not result.holds:
            entry["violations"] += 1
            self.violations += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(result.to_dict())

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        for name, entry in other.counts.items():
            mine = self.counts.setdefault(name, {"cases": 0, "violations": 0, "min_slack": math.inf})
            mine["cases"] += entry["cases"]
            mine["violations"] += entry["violations"]
            mine["min_slack"] = min(mine["min_slack"], entry["min_slack"])
        self.failures.extend(other.failures[:max(0, MAX_FAILURES_KEPT - len(self.failures))])
        self.informational.extend(other.informational)
        self.violations += other.violations
        return self

    def to_dict(self) -> Dict[str, Any]:
        counts = {
            name: {**entry, "min_slack": entry["min_slack"] if math.isfinite(entry["min_slack"]) else None}
            for name, entry in sorted(self.counts.items())
        }
        payload = {
            "suite": self.name,
            "seed": self.seed,
            "ok": self.ok,
            "cases": self.cases,
            "violations": self.violations,
            "checks": counts,
            "failures": self.failures,
            "informational": self.informational,
        }
        if self.results:
            payload["results"] = self.results
        return payload


def _stream(seed: int, name: str) -> np.random.Generator:
    return make_rng(mix_seed(seed, STREAMS[name]))


def random_light_spec(rng: np.random.Generator) -> DistributionSpec:
    """A light-tailed spec with random parameters"""
    family = rng.choice([f.value for f in LIGHT_TAIL_FAMILIES])
    if family == Family.RADEMACHER.value:
        return DistributionSpec.rademacher()
    if family == Family.UNIFORM.value:
        return DistributionSpec.uniform(float(rng.uniform(0.1, 5.0)))
    if family == Family.GAUSSIAN.value:
        return DistributionSpec.gaussian(float(rng.uniform(0.1, 5.0)))
    if family == Family.LAPLACE.value:
        return DistributionSpec.laplace(float(rng.uniform(0.1, 3.0)))
    return DistributionSpec.two_point(float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.1, 5.0)))


def random_spec(rng: np.random.Generator) -> DistributionSpec:
    """Any spec of the menu, Pareto with kappa in (2.2, 8)"""
    if rng.random() < 0.2:
        return DistributionSpec.pareto(float(rng.uniform(2.2, 8.0)), float(rng.uniform(0.1, 3.0)))
    return random_light_spec(rng)


def random_discrete_law(rng: np.random.Generator, max_atoms: int = 5):
    size = int(rng.integers(1, max_atoms + 1))
    values = rng.normal(0.0, 2.0, size)
    probs = rng.dirichlet(np.ones(size))
    probs = probs / math.fsum(probs)
    return values.tolist(), probs.tolist()


def _maximal_weighted_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "maximal_weighted")
    for _ in range(cases):
        K = int(rng.integers(2, 65))
        m = int(rng.integers(0, K))
        # eighths keep the exact rationals short
        a = np.cumsum(np.floor(8.0 * np.abs(rng.standard_normal(K))) + 1.0) / 8.0
        b = np.round(8.0 * rng.standard_normal(K)) / 8.0
        report.record(maximal_weighted_check(a.tolist(), b.tolist(), m, K))


def _moment_split_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "moment_split")
    for _ in range(cases):
        p = float(rng.uniform(2.01, 8.0))
        report.record(moment_split_check(random_discrete_law(rng), random_discrete_law(rng), p))


def _poly_from_exp_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "poly_from_exp")
    for _ in range(cases):
        spec = random_light_spec(rng)
        radius = spec.law.exp_radius
        t = float(rng.uniform(0.05, 0.9) * radius) if math.isfinite(radius) else float(rng.uniform(0.05, 3.0))
        q = int(rng.integers(2, 11))
        report.record(poly_from_exp_check(spec, t, q))


def _truncation_sum_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "truncation_sum")
    for _ in range(cases):
        x = float(rng.normal(0.0, 2.0))
        q = float(rng.uniform(2.01, 6.0))
        n = int(rng.integers(1, 201))
        report.record(truncation_sum_check(x, q, n, corrected=True))
    # the contested point of the uncorrected majorant, reported for information
    report.record(truncation_sum_check(2.0, 3.0, 100))


def _truncated_variance_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "truncated_variance")
    for _ in range(cases):
        spec = random_spec(rng)
        K = float(rng.uniform(0.05, 3.0) * spec.law.sigma)
        report.record(truncated_variance_check(spec, K))


def _sub_gaussian_moment_cases(report: SuiteReport, cases: int, seed: int):
    rng = _stream(seed, "sub_gaussian_moment")
    for _ in range(cases):
        report.record(sub_gaussian_moment_check(float(rng.uniform(0.1, 5.0)), float(rng.uniform(2.0, 12.0))))


def lemma_suite(cases: int = 10_000, seed: int = 0) -> SuiteReport:
    """
    Randomized batteries of the inequality checks

    Args:
        cases: Random cases per check family (0 skips every check)
        seed: Master seed

    Returns:
        SuiteReport
    """
    report = SuiteReport("lemmas", seed)
    if cases > 0:
        _maximal_weighted_cases(report, cases, seed)
        _moment_split_cases(report, cases, seed)
        _poly_from_exp_cases(report, cases, seed)
        _truncation_sum_cases(report, cases, seed)
        _truncated_variance_cases(report, cases, seed)
        _sub_gaussian_moment_cases(report, cases, seed)
        for result in epoch_bound_identity_checks(range(2, 9)):
            report.record(result)
        for m in (1, 10, 100):
            report.record(variance_diff_check(DistributionSpec.uniform(2.0), 3.0, m))
    logger.info(f"📊 lemma suite: {report.cases} cases, {report.violations} violations")
    return report


def _reference_epoch_index(m_max: int) -> List[int]:
    """n_m for m = 0..m_max by a forward scan over the exact D(n)"""
    table = [0] * (m_max + 1)
    n = 1
    for m in range(4, m_max + 1):
        while D_exact(n) + 1 <= m:
            n += 1
        table[m] = n
    return table


def epoch_table_check(m_max: int = EPOCH_M_MAX) -> CheckResult:
    """Mismatch count of epoch_index against the forward scan for 4 <= m <= m_max"""
    reference = _reference_epoch_index(m_max)
    mismatches = [m for m in range(4, m_max + 1) if epoch_index(m) != reference[m]]
    witness = {"m_max": m_max, "first_mismatch": mismatches[0] if mismatches else None}
    return CheckResult.compare("epoch.n_m_table", len(mismatches), 0, witness)


def _random_weights(rng: np.random.Generator, max_length: int) -> List[float]:
    length = int(rng.integers(1, max_length + 1))
    decay = float(rng.uniform(0.0, 3.0))
    u = rng.exponential(1.0, length) * np.arange(1, length + 1, dtype=float) ** (-decay)
    u[0] = max(u[0], 1e-3)
    if length > 1 and rng.random() < 0.2:
        u[int(rng.integers(1, length)):] = 0.0
    return u.tolist()


def block_agreement_check(u: List[float], tail: Optional[TailBound] = None,
                          expected_nm: Optional[Callable[[int], int]] = None) -> CheckResult:
    """
    Blockwise min N_{b(m)} against the closed-form n_m for every m, plus the
    mass bound U_b <= 2^{-b+1} U of every block
    """
    partition = block_partition(u, tail)
    mismatches = []
    for m in range(1, partition.horizon + 1):
        from_blocks = partition.block_min(m)
        if from_blocks != closed_form_nm(partition, m) or (expected_nm and from_blocks != expected_nm(m)):
            mismatches.append(m)
    total = float(partition.total)
    heavy = [b for b in partition.blocks if block_mass(partition, b) > 2.0 ** (1 - b) * total * (1 + 1e-12)]
    witness = {
        "horizon": partition.horizon,
        "tail": (tail or TailBound()).model_dump(),
        "first_mismatch": mismatches[0] if mismatches else None,
        "heavy_blocks": heavy[:10],
    }
    return CheckResult.compare("block.closed_form", len(mismatches) + len(heavy), 0, witness)


def partition_suite(cases: int = 100, seed: int = 0, m_max: int = EPOCH_M_MAX,
                    max_length: int = BLOCK_MAX_LENGTH) -> SuiteReport:
    """
    Epoch table and block partition batteries

    Args:
        cases: Random weight sequences
        seed: Master seed
        m_max: Upper end of the exhaustive epoch table
        max_length: Longest random weight sequence

    Returns:
        SuiteReport
    """
    report = SuiteReport("partitions", seed)
    if cases > 0:
        report.record(epoch_table_check(m_max))
        horizon = 60
        geometric = [2.0 ** (-k) for k in range(1, horizon + 1)]
        report.record(block_agreement_check(geometric, TailBound(type="geometric", ratio=0.5), expected_nm=lambda m: m))
        report.record(block_agreement_check([1.0] * 1000))
        rng = _stream(seed, "block_partition")
        for _ in range(cases):
            report.record(block_agreement_check(_random_weights(rng, max_length)))
    logger.info(f"📊 partition suite: {report.cases} cases, {report.violations} violations")
    return report


def _spec_arg(value: Any) -> DistributionSpec:
    return value if isinstance(value, DistributionSpec) else DistributionSpec.from_dict(value)


def _with_spec(check: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def run(spec, **kwargs):
        return check(_spec_arg(spec), **kwargs)
    return run


BATCH_CHECKS: Dict[str, Callable[..., Any]] = {
    "maximal_weighted": maximal_weighted_check,
    "moment_split": lambda law_x, law_y, p: moment_split_check(tuple(law_x), tuple(law_y), p),
    "poly_from_exp": _with_spec(poly_from_exp_check),
    "truncation_sum": truncation_sum_check,
    "epoch_bound_identity": lambda n_range: epoch_bound_identity_checks(list(n_range)),
    "truncated_variance": _with_spec(truncated_variance_check),
    "variance_diff": _with_spec(variance_diff_check),
    "sub_gaussian_moment": sub_gaussian_moment_check,
}


def run_batch(requests: Iterable[Dict[str, Any]]) -> SuiteReport:
    """
    Runs a list of {"check": name, "args": {...}} requests

    Args:
        requests: Check requests

    Returns:
        SuiteReport; results lists every check in request order

    Raises:
        InvalidSpecError: unknown check name or malformed arguments
    """
    report = SuiteReport("batch")
    for index, request in enumerate(requests):
        if not isinstance(request, dict) or "check" not in request:
            raise InvalidSpecError(f"request {index} must be an object with a 'check' field")
        name = request["check"]
        if name not in BATCH_CHECKS:
            raise InvalidSpecError(f"request {index}: unknown check '{name}', expected one of {sorted(BATCH_CHECKS)}")
        try:
            outcome = BATCH_CHECKS[name](**request.get("args", {}))
        except TypeError as e:
            raise InvalidSpecError(f"request {index} ({name}): {e}") from e
        for result in outcome if isinstance(outcome, list) else [outcome]:
            report.record(result)
            report.results.append(result.to_dict())
    logger.info(f"📊 batch: {len(report.results)} results, {report.violations} violations")
    return report
