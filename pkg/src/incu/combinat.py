"""Exact combinatorics over the set of strictly increasing index tuples.

All tuples are 0-based internally and ordered lexicographically; anything
user-facing converts to 1-based labels at the serialization boundary.
Cardinalities are exact Python integers but are capped at 128 bits so that
impossible budgets fail loudly instead of silently degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "count",
    "IndexSpace",
    "unrank",
    "rank_of",
    "sample_without_replacement",
    "draw_binomial",
    "randint_below",
]

_CARDINALITY_LIMIT = 1 << 128
_INT64_MAX = 2**63 - 1
# Below this cardinality, sampling without replacement shuffles the full
# rank enumeration; above it, Floyd's algorithm keeps memory at O(m).
_ENUMERATION_FALLBACK = 10**6


def count(n: int, r: int) -> int:
    """Number of strictly increasing r-tuples from {0, ..., n-1}, exactly.

    Raises DomainError unless 1 <= r <= n, and OverflowError if the result
    needs more than 128 bits.
    """
    n, r = int(n), int(r)
    if r < 1 or n < r:
        raise DomainError(f"need 1 <= r <= n, got n={n}, r={r}")
    c = math.comb(n, r)
    if c >= _CARDINALITY_LIMIT:
        raise OverflowError(
            f"C({n},{r}) exceeds the 128-bit cardinality cap")
    return c


@dataclass(frozen=True)
class IndexSpace:
    """The index set of strictly increasing r-tuples over n observations."""

    n: int
    r: int
    cardinality: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cardinality", count(self.n, self.r))


def unrank(space: IndexSpace, rank: int) -> tuple:
    """Return the rank-th tuple of the space in lexicographic order.

    Binary-searches each position using the hockey-stick prefix count
    C(n-lo, s) - C(n-1-c, s) of tuples whose current element lies in
    [lo, c], so a tuple costs O(r log n) binomial evaluations.
    """
    rank = int(rank)
    if not 0 <= rank < space.cardinality:
        raise DomainError(
            f"rank {rank} out of range [0, {space.cardinality})")
    n, r = space.n, space.r
    out = []
    lo = 0
    rk = rank
    for pos in range(r):
        s = r - pos
        total = math.comb(n - lo, s)
        lo_c, hi_c = lo, n - s
        while lo_c < hi_c:
            mid = (lo_c + hi_c) // 2
            if total - math.comb(n - 1 - mid, s) > rk:
                hi_c = mid
            else:
                lo_c = mid + 1
        c = lo_c
        rk -= total - math.comb(n - c, s)
        out.append(c)
        lo = c + 1
    return tuple(out)


def rank_of(space: IndexSpace, indices) -> int:
    """Lexicographic position of a strictly increasing tuple (unrank inverse)."""
    idx = [int(i) for i in indices]
    if len(idx) != space.r:
        raise DomainError(f"expected {space.r} indices, got {len(idx)}")
    if any(not 0 <= i < space.n for i in idx):
        raise DomainError("index out of range")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise DomainError("indices must be strictly increasing")
    n, r = space.n, space.r
    rank = 0
    lo = 0
    for pos, c in enumerate(idx):
        s = r - pos
        rank += math.comb(n - lo, s) - math.comb(n - c, s)
        lo = c + 1
    return rank


def randint_below(rng: np.random.Generator, bound: int) -> int:
    """Exact uniform integer in [0, bound) for arbitrary-precision bounds."""
    if bound <= 0:
        raise DomainError("bound must be positive")
    if bound <= _INT64_MAX:
        return int(rng.integers(0, bound))
    k = (bound - 1).bit_length()
    nbytes = (k + 7) // 8
    shift = nbytes * 8 - k
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "big") >> shift
        if x < bound:
            return x


def sample_without_replacement(space: IndexSpace, m: int,
                               rng: np.random.Generator) -> np.ndarray:
    """Draw m distinct tuples uniformly over all m-subsets of the space.

    Returns an (m, r) int64 array sorted by rank (ascending lex order);
    the subset, not its order, is the random object.  Uses a full-range
    shuffle for small spaces and Floyd's distinct-integer sampling above
    the enumeration fallback, so memory stays O(m) in the budgeted regime.
    """
    m = int(m)
    card = space.cardinality
    if m < 0 or m > card:
        raise DomainError(f"cannot draw {m} distinct tuples from {card}")
    if m == 0:
        return np.empty((0, space.r), dtype=np.int64)
    if card <= _ENUMERATION_FALLBACK:
        ranks = np.sort(rng.permutation(int(card))[:m])
        ranks = [int(t) for t in ranks]
    else:
        chosen = set()
        for j in range(card - m, card):
            t = randint_below(rng, j + 1)
            if t in chosen:
                t = j
            chosen.add(t)
        ranks = sorted(chosen)
    out = np.empty((m, space.r), dtype=np.int64)
    for i, rk in enumerate(ranks):
        out[i] = unrank(space, rk)
    return out


def draw_binomial(trials: int, p: float, rng: np.random.Generator) -> int:
    """Exact binomial variate, valid for arbitrarily large trial counts.

    Within the int64 range this defers to numpy's exact sampler (BTPE /
    inversion).  Larger counts are first reduced by conditioning on beta
    order statistics: fixing the k-th smallest of n uniforms at V splits
    the count into k + Bin(n-k, (p-V)/(1-V)) when V <= p, and
    Bin(k-1, p/V) otherwise, halving n per step.
    """
    trials = int(trials)
    if trials < 0:
        raise DomainError("trials must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if p == 0.0:
        return 0
    if p == 1.0:
        return trials
    total = 0
    n = trials
    while n > _INT64_MAX:
        k = (n + 1) // 2
        v = float(rng.beta(k, n + 1 - k))
        if v <= p:
            total += k
            p = (p - v) / (1.0 - v)
            n = n - k
        else:
            p = p / v
            n = k - 1
        p = min(max(p, 0.0), 1.0)
    return total + int(rng.binomial(n, p))
