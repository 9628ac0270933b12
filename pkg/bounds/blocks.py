"""
Dyadic block partition of a weight sequence

For weights u_1..u_H (u_k = E|X_k|^q / ubar_a_k^q) with an analytic majorant
of the tail beyond the horizon, U = sum_k u_k and T_n = sum_{k >= n} u_k.
Index n goes to block b(n) where 2^{-b} U < T_n <= 2^{-b+1} U. All
comparisons use exact rationals, so the closed-form n_m and the block minimum
agree exactly.
"""

import math
import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from utils.exceptions import InfeasibleParameterError, InvalidSpecError, KmtLabError

logger = logging.getLogger(__name__)


class TailBound(BaseModel):
    """
    Analytic majorant of sum_{k > H} u_k

    zero: the weights vanish beyond the horizon.
    geometric: u_k <= u_H ratio^{k - H} for k > H, so the tail is at most
    u_H ratio / (1 - ratio).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["zero", "geometric"] = "zero"
    ratio: Optional[float] = None

    @model_validator(mode="after")
    def _check_ratio(self) -> "TailBound":
        if self.type == "geometric" and (self.ratio is None or not 0.0 < self.ratio < 1.0):
            raise ValueError("a geometric tail bound needs 0 < ratio < 1")
        return self

    @classmethod
    def from_dict(cls, payload: Dict) -> "TailBound":
        try:
            return cls.model_validate(payload)
        except ValidationError as e:
            raise InvalidSpecError(f"invalid tail bound: {e}") from e

    def beyond(self, last_weight: Fraction) -> Fraction:
        if self.type == "zero":
            return Fraction(0)
        r = Fraction(self.ratio)
        return last_weight * r / (1 - r)


def floor_log2(x: Fraction) -> int:
    """Largest integer k with 2^k <= x, for a rational x >= 1"""
    num, den = x.numerator, x.denominator
    k = num.bit_length() - den.bit_length()
    if (den << k) > num:
        k -= 1
    return k


@dataclass
class BlockPartition:
    """
    Blocks N_b of {1..horizon}

    blocks maps b to the inclusive index range of N_b; indices whose tail T_n
    is exactly zero (trailing zero weights with a zero tail bound) satisfy no
    dyadic inequality and form the terminal ``null_block``.
    """
    weights: List[Fraction]
    tail_beyond: Fraction
    total: Fraction
    tails: List[Fraction]
    levels: List[Optional[int]]
    blocks: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    null_block: Optional[Tuple[int, int]] = None

    @property
    def horizon(self) -> int:
        return len(self.weights)

    @property
    def U(self) -> float:
        return float(self.total)

    def T(self, n: int) -> Fraction:
        """T_n = sum_{k >= n} u_k including the tail beyond the horizon"""
        if n == self.horizon + 1:
            return self.tail_beyond
        self._check_index(n)
        return self.tails[n - 1]

    def b_of(self, m: int) -> Optional[int]:
        """b(m), None for indices of the null block"""
        self._check_index(m)
        return self.levels[m - 1]

    def block(self, b: int) -> List[int]:
        if b not in self.blocks:
            return []
        start, end = self.blocks[b]
        return list(range(start, end + 1))

    def block_min(self, m: int) -> int:
        """min N_{b(m)}"""
        b = self.b_of(m)
        if b is None:
            return self.null_block[0]
        return self.blocks[b][0]

    @cached_property
    def negated_tails(self) -> List[Fraction]:
        """-T_1, -T_2, ... in ascending order"""
        return [-t for t in self.tails]

    def _check_index(self, m: int):
        if not 1 <= m <= self.horizon:
            raise InfeasibleParameterError(f"index {m} outside 1..{self.horizon}")

    def to_dict(self) -> Dict:
        return {
            "horizon": self.horizon,
            "U": float(self.total),
            "tail_beyond": float(self.tail_beyond),
            "blocks": {str(b): list(r) for b, r in sorted(self.blocks.items())},
            "null_block": list(self.null_block) if self.null_block else None,
        }


def block_partition(u: Sequence[float], tail: Optional[TailBound] = None,
                    horizon: Optional[int] = None) -> BlockPartition:
    """
    Partitions 1..horizon into the dyadic blocks of the tail sums

    Args:
        u: Nonnegative weights u_1.. (floats are converted exactly)
        tail: Majorant of the weights beyond the horizon (zero by default)
        horizon: Number of weights used (default len(u))

    Returns:
        BlockPartition

    Raises:
        InfeasibleParameterError: negative weights, or U zero or infinite
    """
    tail = tail or TailBound()
    horizon = len(u) if horizon is None else int(horizon)
    if horizon < 1 or horizon > len(u):
        raise InfeasibleParameterError(f"horizon {horizon} must lie in 1..{len(u)}")
    values = list(u[:horizon])
    for k, value in enumerate(values, start=1):
        if not math.isfinite(float(value)) or value < 0:
            raise InfeasibleParameterError(f"u_{k} = {value} must be finite and nonnegative")
    weights = [Fraction(value) for value in values]
    tail_beyond = tail.beyond(weights[-1])

    tails = [Fraction(0)] * horizon
    running = tail_beyond
    for n in range(horizon, 0, -1):
        running += weights[n - 1]
        tails[n - 1] = running
    total = tails[0]
    if total == 0:
        raise InfeasibleParameterError("U = 0: the weights carry no mass")

    levels: List[Optional[int]] = []
    blocks: Dict[int, Tuple[int, int]] = {}
    null_start = None
    for n, T_n in enumerate(tails, start=1):
        if T_n == 0:
            levels.append(None)
            null_start = n if null_start is None else null_start
            continue
        b = floor_log2(total / T_n) + 1
        levels.append(b)
        start, _ = blocks.get(b, (n, n))
        blocks[b] = (start, n)
    null_block = (null_start, horizon) if null_start is not None else None
    logger.debug(f"block partition: horizon={horizon}, {len(blocks)} blocks, U={float(total):.6g}")
    return BlockPartition(weights, tail_beyond, total, tails, levels, blocks, null_block)


def block_mass(partition: BlockPartition, b: int) -> float:
    """U_b = sum_{n in N_b} u_n; at most 2^{-b+1} U"""
    return float(sum((partition.weights[n - 1] for n in partition.block(b)), Fraction(0)))


def closed_form_nm(partition: BlockPartition, m: int) -> int:
    """
    min{n : log2(U / T_n) >= floor(log2(U / T_m))}

    T_n is nonincreasing, so the set is an upper interval found by bisection
    on U - 2^k T_n >= 0.
    """
    T_m = partition.T(m)
    if T_m == 0:
        return partition.null_block[0]
    k = floor_log2(partition.total / T_m)
    threshold = partition.total / (1 << k)
    # first n with T_n <= U / 2^k
    return bisect_left(partition.negated_tails, -threshold) + 1


def power_nm(partition: BlockPartition, m: int) -> int:
    """
    n_m = min N_{b(m)}, cross-validated against the closed form

    Args:
        partition: Block partition
        m: Index in 1..horizon

    Returns:
        n_m
    """
    if not 1 <= m <= partition.horizon:
        raise InfeasibleParameterError(f"m = {m} is beyond the horizon {partition.horizon}")
    from_blocks = partition.block_min(m)
    from_formula = closed_form_nm(partition, m)
    if from_blocks != from_formula:
        logger.error(f"❌ n_m mismatch at m={m}: blocks {from_blocks}, closed form {from_formula}")
        raise KmtLabError(f"n_m mismatch at m={m}: {from_blocks} != {from_formula}")
    return from_blocks
