"""
Epoch scheme d(n) = 2^{2^n}, D(n) = d(1) + ... + d(n)

d(n) is carried through its log2-value 2^n. D(n) is an exact Python integer
while it stays small (n <= EXACT_LIMIT) and a log2-space float beyond.
"""

import math
import logging
from functools import lru_cache
from typing import List, Tuple

from utils.exceptions import InfeasibleParameterError

logger = logging.getLogger(__name__)

EXACT_LIMIT = 5
LOG2 = math.log(2.0)


def log2_d(n: int) -> int:
    """log2 d(n) = 2^n"""
    if n < 0:
        raise InfeasibleParameterError(f"epoch number must be >= 0, got {n}")
    return 1 << n


def d_exact(n: int) -> int:
    """d(n) = 2^{2^n} as an exact integer"""
    return 1 << log2_d(n)


@lru_cache(maxsize=None)
def D_exact(n: int) -> int:
    """D(n) = sum_{k=1}^n 2^{2^k} as an exact integer, D(0) = 0"""
    if n < 0:
        raise InfeasibleParameterError(f"epoch number must be >= 0, got {n}")
    return sum(d_exact(k) for k in range(1, n + 1))


def log2_D(n: int) -> float:
    """log2 D(n), exact-integer based for n <= EXACT_LIMIT, -inf at n = 0"""
    if n == 0:
        return -math.inf
    if n <= EXACT_LIMIT:
        return math.log2(D_exact(n))
    # D(n) = d(n) (1 + D(n-1)/d(n)) and D(n-1) <= d(n-1) * 2 = 2 sqrt(d(n))
    head = float(log2_d(n))
    ratio_log2 = log2_D(n - 1) - head
    return head + math.log2(1.0 + 2.0 ** ratio_log2) if ratio_log2 > -1074 else head


def epoch_index(m: int) -> int:
    """
    n_m: the largest n with D(n - 1) + 1 <= m

    D(n - 1) + 1 > m as soon as d(n - 1) > m, which happens once 2^{n-1}
    exceeds the bit length of m, so only exact small integers are compared.

    Args:
        m: Integer, m >= 4

    Returns:
        n_m >= 1
    """
    if int(m) != m or m < 4:
        raise InfeasibleParameterError(f"epoch_index needs an integer m >= 4, got {m}")
    m = int(m)
    n = 1
    # invariant: D(n - 1) + 1 <= m
    while True:
        if log2_d(n) > m.bit_length():
            break
        if D_exact(n) + 1 > m:
            break
        n += 1
    return n


def epoch_bounds(n: int) -> Tuple[int, int]:
    """First and last index of epoch n: D(n - 1) + 1 .. D(n)"""
    if n < 1:
        raise InfeasibleParameterError(f"epochs start at n = 1, got {n}")
    return D_exact(n - 1) + 1, D_exact(n)


def epoch_blocks(K: int) -> List[Tuple[int, int]]:
    """
    Epochs covering 1..K, the last one cut at K

    Args:
        K: Path length, K >= 1

    Returns:
        List of inclusive (start, end) index pairs
    """
    if K < 1:
        raise InfeasibleParameterError(f"K must be >= 1, got {K}")
    blocks = []
    n = 1
    while True:
        start, end = epoch_bounds(n)
        if start > K:
            break
        blocks.append((start, min(end, K)))
        n += 1
    return blocks
