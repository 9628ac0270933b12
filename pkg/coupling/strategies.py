"""
Explicit couplings with exact marginals

These are surrogates for the optimal coupling: empirical discrepancies are
measured for the surrogate only.
"""

import logging
from typing import Dict, Tuple, Type, Union

import numpy as np
from scipy.stats import binom

from bounds import epoch_blocks
from coupling.base_strategy import CouplingStrategy, quantile_gaussian
from dist import DistributionSpec, Family
from utils.exceptions import UnsupportedStrategyError

logger = logging.getLogger(__name__)

SURROGATE_NOTE = "for the surrogate coupling"


class IndependentStrategy(CouplingStrategy):
    """X and Y drawn independently"""

    kind = "independent"

    def couple(self, spec, K, rng):
        self.require(spec)
        law = spec.law
        x = law.sample(rng, K)
        y = law.sigma * rng.standard_normal(K)
        return x, y


class PerVariableQuantileStrategy(CouplingStrategy):
    """
    Y_i = sigma Phi^{-1}(F(X_i^-) + V_i P(X = X_i)) with an auxiliary uniform
    V_i, so Y is exactly Gaussian also when X has atoms
    """

    kind = "per_variable_quantile"

    def couple(self, spec, K, rng):
        self.require(spec)
        law = spec.law
        x = law.sample(rng, K)
        v = rng.random(K)
        atom = law.atom(x)
        u_low = law.left_cdf(x) + v * atom
        u_high = law.right_sf(x) + (1.0 - v) * atom
        return x, quantile_gaussian(u_low, u_high, law.sigma)


class BlockwiseSumQuantileStrategy(CouplingStrategy):
    """
    Epoch blocks of length 2^{2^n}: block sums are quantile coupled, then each
    path is filled in from its exact conditional law given the block sum
    """

    kind = "blockwise_sum_quantile"
    families = (Family.RADEMACHER, Family.GAUSSIAN)

    def couple(self, spec, K, rng):
        self.require(spec)
        sigma = spec.law.sigma
        x = np.empty(K)
        y = np.empty(K)
        for start, end in epoch_blocks(K):
            L = end - start + 1
            if spec.family == Family.RADEMACHER:
                x_block, y_sum = self._rademacher_block(L, rng)
            else:
                x_block, y_sum = self._gaussian_block(L, sigma, rng)
            x[start - 1:end] = x_block
            y[start - 1:end] = self._bridge(y_sum, L, sigma, rng)
        return x, y

    @staticmethod
    def _rademacher_block(L: int, rng: np.random.Generator) -> Tuple[np.ndarray, float]:
        ups = int(rng.binomial(L, 0.5))
        v = rng.random()
        # sum = 2 ups - L; P(sum < s) = P(Bin < ups)
        atom = binom.pmf(ups, L, 0.5)
        u_low = binom.cdf(ups - 1, L, 0.5) + v * atom
        u_high = binom.sf(ups, L, 0.5) + (1.0 - v) * atom
        y_sum = float(quantile_gaussian(np.asarray(u_low), np.asarray(u_high), np.sqrt(L)))
        # uniform arrangement of the +1s is the conditional law given the sum
        block = np.full(L, -1.0)
        block[:ups] = 1.0
        return rng.permutation(block), y_sum

    def _gaussian_block(self, L: int, sigma: float, rng: np.random.Generator) -> Tuple[np.ndarray, float]:
        x_block = self._bridge(None, L, sigma, rng)
        # quantile coupling of two Gaussians with equal variance is the identity
        return x_block, float(np.sum(x_block))

    @staticmethod
    def _bridge(total, L: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
        """L i.i.d. N(0, sigma^2) values, conditioned on their sum when total is given"""
        z = sigma * rng.standard_normal(L)
        if total is None:
            return z
        return z - z.mean() + total / L


STRATEGIES: Dict[str, Type[CouplingStrategy]] = {
    IndependentStrategy.kind: IndependentStrategy,
    PerVariableQuantileStrategy.kind: PerVariableQuantileStrategy,
    BlockwiseSumQuantileStrategy.kind: BlockwiseSumQuantileStrategy,
}


def get_strategy(strategy: Union[str, CouplingStrategy]) -> CouplingStrategy:
    """Strategy instance for a kind name (instances pass through)"""
    if isinstance(strategy, CouplingStrategy):
        return strategy
    key = str(strategy).strip().lower().replace("-", "_")
    if key not in STRATEGIES:
        raise UnsupportedStrategyError(str(strategy), "any")
    return STRATEGIES[key]()


def check_supported(spec: DistributionSpec, strategy: Union[str, CouplingStrategy]) -> CouplingStrategy:
    instance = get_strategy(strategy)
    instance.require(spec)
    return instance
