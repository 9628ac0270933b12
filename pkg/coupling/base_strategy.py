"""
Base class of coupling strategies
"""

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np
from scipy.special import ndtri

from dist import DistributionSpec, Family
from utils.exceptions import UnsupportedStrategyError


def quantile_gaussian(u_low: np.ndarray, u_high: np.ndarray, scale: float) -> np.ndarray:
    """
    Gaussian quantile of a probability given by both of its sides

    u_low = P(X < x) + V P(X = x) and u_high = 1 - u_low computed from the
    right tail, so neither tail loses precision.
    """
    return scale * np.where(u_low <= 0.5, ndtri(u_low), -ndtri(u_high))


class CouplingStrategy(ABC):
    """Common base of all coupling strategies"""

    kind: str = ""
    families: Optional[Tuple[Family, ...]] = None

    def __init__(self, name: Optional[str] = None, description: str = ""):
        self.name = name or self.kind
        self.description = description

    def supports(self, spec: DistributionSpec) -> bool:
        return self.families is None or spec.family in self.families

    def require(self, spec: DistributionSpec):
        if not self.supports(spec):
            raise UnsupportedStrategyError(self.kind, spec.family.value)

    @abstractmethod
    def couple(self, spec: DistributionSpec, K: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """
        Draws one coupled pair of paths

        Args:
            spec: Law of the X coordinates
            K: Path length
            rng: Generator owned by this replication

        Returns:
            (x, y): X i.i.d. from spec, Y i.i.d. Gaussian(0, Var X)
        """
