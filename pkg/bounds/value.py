"""
BoundValue: a log-space evaluated right-hand side with its term ledger
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.special import logsumexp

from config.settings import get_settings
from utils.exceptions import InfeasibleParameterError

NON_RIGOROUS_DEFAULT = "non-rigorous default"


@dataclass
class BoundValue:
    """
    log_value = log_prefactor + logsumexp(log_terms)

    +inf marks a divergent (vacuous) series, -inf an identically zero bound.
    truncation_bound is the analytic majorant of everything the ledger omits,
    already multiplied by the prefactor.
    """
    log_value: float
    terms_used: int
    truncation_bound: float = 0.0
    log_prefactor: float = 0.0
    log_terms: List[float] = field(default_factory=list, repr=False)
    divergent: bool = False
    warnings: List[str] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, log_terms: List[float], log_prefactor: float = 0.0,
                   truncation_bound: float = 0.0, **kwargs) -> "BoundValue":
        """Builds a value whose log_value is recomputed from the ledger"""
        if log_terms:
            log_sum = float(logsumexp(np.asarray(log_terms, dtype=float)))
        else:
            log_sum = -math.inf
        return cls(
            log_value=log_prefactor + log_sum,
            terms_used=len(log_terms),
            truncation_bound=truncation_bound,
            log_prefactor=log_prefactor,
            log_terms=list(log_terms),
            **kwargs,
        )

    @classmethod
    def divergent_value(cls, **kwargs) -> "BoundValue":
        return cls(log_value=math.inf, terms_used=0, truncation_bound=math.inf, divergent=True, **kwargs)

    @property
    def value(self) -> float:
        if self.log_value == math.inf:
            return math.inf
        return math.exp(self.log_value) if self.log_value < 709.0 else math.inf

    @property
    def vacuous(self) -> bool:
        """Divergent, or a probability bound that is at least 1"""
        return self.divergent or self.log_value >= 0.0

    def recompute(self) -> float:
        """exp(log_value) rebuilt from the ledger"""
        if self.divergent:
            return math.inf
        if not self.log_terms:
            return 0.0
        return math.exp(self.log_prefactor + float(logsumexp(np.asarray(self.log_terms))))

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "log_value": self.log_value,
            "value": self.value,
            "vacuous": self.vacuous,
            "terms_used": self.terms_used,
            "truncation_bound": self.truncation_bound,
        }
        if self.warnings:
            payload["warnings"] = list(self.warnings)
        return payload

    def to_row(self) -> Dict[str, Any]:
        """Flat row for CSV series: parameters first, then the value fields"""
        row = dict(self.params)
        row.update(self.to_dict())
        row.pop("warnings", None)
        return row


def resolve_constant(value: Optional[float], name: str, warnings: List[str]) -> float:
    """
    Returns a universal constant, falling back to the configured default

    The default is recorded in ``warnings`` since no numeric value of these
    constants is known.
    """
    if value is None:
        value = get_settings().DEFAULT_CONSTANT
        warnings.append(f"{name}={value:g} is a {NON_RIGOROUS_DEFAULT}")
    if not value > 0 or not math.isfinite(value):
        raise InfeasibleParameterError(f"constant {name} must be positive and finite, got {value}")
    return float(value)
