"""Colex subset indexing and exact binomial coefficients.

Every row and column index in the package is the colex rank of a subset,
so the ordering convention lives here and nowhere else.  Colex ranks of
k-subsets of {0..m-1} form a prefix of the ranks for {0..m}, which lets
sweeps over growing ground sets reuse indices.  Elements are 0-based
internally; the command-line layer is the only place 1-based labels
appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

# Pascal rows are cached up to this n; larger arguments fall back to
# math.comb.  Column generation hits the same small binomials constantly.
BINOMIAL_CACHE_MAX = 128

_pascal: list[list[int]] = [[1]]


def binomial(n: int, k: int) -> int:
    """Exact C(n, k), with value 0 whenever k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    if n > BINOMIAL_CACHE_MAX:
        return math.comb(n, k)
    while len(_pascal) <= n:
        prev = _pascal[-1]
        _pascal.append([1, *(prev[i] + prev[i + 1] for i in range(len(prev) - 1)), 1])
    return _pascal[n][k]


@dataclass(frozen=True)
class KSubset:
    """A k-subset of {0, ..., m-1}, stored as a strictly increasing tuple."""

    elements: tuple[int, ...]
    m: int

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError(f"elements must be strictly increasing, got {self.elements}")
        if self.elements and not (0 <= self.elements[0] and self.elements[-1] < self.m):
            raise ValueError(f"elements outside [0, {self.m}): {self.elements}")

    def __len__(self) -> int:
        return len(self.elements)


def colex_rank(elements: Sequence[int]) -> int:
    """Colex rank of a strictly increasing tuple: sum of C(e_j, j+1)."""
    return sum(binomial(e, pos + 1) for pos, e in enumerate(elements))


def colex_unrank(rank: int, k: int, m: int) -> tuple[int, ...]:
    """The k-subset of {0, ..., m-1} with the given colex rank."""
    if not 0 <= rank < binomial(m, k):
        raise ValueError(f"rank {rank} out of range for {k}-subsets of a {m}-set")
    out = []
    r = rank
    c = m
    for pos in range(k, 0, -1):
        c -= 1
        while binomial(c, pos) > r:
            c -= 1
        out.append(c)
        r -= binomial(c, pos)
    out.reverse()
    return tuple(out)


def subset_rank(s: KSubset) -> int:
    """Colex rank of a KSubset; independent of the ground-set size."""
    return colex_rank(s.elements)


def subset_unrank(rank: int, k: int, m: int) -> KSubset:
    """Inverse of subset_rank for k-subsets of {0, ..., m-1}."""
    return KSubset(colex_unrank(rank, k, m), m)


def iter_ksubsets(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield all k-subsets of {0, ..., m-1} in colex order."""
    if k < 0 or k > m:
        return
    if k == 0:
        yield ()
        return
    for top in range(k - 1, m):
        for rest in iter_ksubsets(top, k - 1):
            yield (*rest, top)


def complement(elements: Sequence[int], m: int) -> tuple[int, ...]:
    """Increasing tuple of ground-set elements not in `elements`."""
    inside = set(elements)
    return tuple(x for x in range(m) if x not in inside)
