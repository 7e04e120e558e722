"""Subset algebra over a finite parameter space.

A hypothesis is a subset of the k parameter points, carried as a bitmask so
set algebra (complement, intersection, containment) is a few integer ops.
The collection of hypotheses under test is always the full power set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import TooLargeError

#: Hard default for power-set enumeration; 2^20 subsets is already a million.
DEFAULT_MAX_ENUM_K = 20

#: Environment variable that overrides the enumeration guard.
MAX_K_ENV = "TRIADIC_MAX_K"


def enumeration_guard() -> int:
    raw = os.environ.get(MAX_K_ENV)
    if raw is None:
        return DEFAULT_MAX_ENUM_K
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_ENUM_K


@dataclass(frozen=True)
class Hypothesis:
    """A subset of {0..k-1}, in bitmask form.

    `mask` bit i set means parameter point i belongs to the hypothesis;
    `k` is the ambient size, needed so complements are well-defined.
    """

    mask: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("ambient size k must be >= 1")
        if not 0 <= self.mask < (1 << self.k):
            raise ValueError(f"mask {self.mask:#x} out of range for k={self.k}")

    @classmethod
    def from_members(cls, k: int, members: Iterable[int]) -> "Hypothesis":
        mask = 0
        for i in members:
            if not 0 <= i < k:
                raise ValueError(f"member {i} out of range for k={k}")
            mask |= 1 << i
        return cls(mask, k)

    @classmethod
    def empty(cls, k: int) -> "Hypothesis":
        return cls(0, k)

    @classmethod
    def full(cls, k: int) -> "Hypothesis":
        return cls((1 << k) - 1, k)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.k) if self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, point: int) -> bool:
        return 0 <= point < self.k and bool(self.mask >> point & 1)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_full(self) -> bool:
        return self.mask == (1 << self.k) - 1

    def complement(self) -> "Hypothesis":
        return Hypothesis(self.mask ^ ((1 << self.k) - 1), self.k)

    def union(self, other: "Hypothesis") -> "Hypothesis":
        self._check_ambient(other)
        return Hypothesis(self.mask | other.mask, self.k)

    def intersection(self, other: "Hypothesis") -> "Hypothesis":
        self._check_ambient(other)
        return Hypothesis(self.mask & other.mask, self.k)

    def issubset(self, other: "Hypothesis") -> bool:
        self._check_ambient(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Hypothesis") -> bool:
        self._check_ambient(other)
        return self.mask & other.mask == 0

    __or__ = union
    __and__ = intersection
    __invert__ = complement

    def __le__(self, other: "Hypothesis") -> bool:
        return self.issubset(other)

    def _check_ambient(self, other: "Hypothesis") -> None:
        if self.k != other.k:
            raise ValueError(f"ambient sizes differ: {self.k} vs {other.k}")

    def __repr__(self) -> str:
        inner = ",".join(str(i) for i in self.members())
        return "{" + inner + "}"


def enumerate_hypotheses(k: int, max_k: int | None = None) -> Iterator[Hypothesis]:
    """Yield all 2^k subsets of {0..k-1} exactly once, empty set first.

    Guarded against accidental blowup; the limit can be raised with the
    TRIADIC_MAX_K environment variable or the `max_k` argument.
    """
    limit = enumeration_guard() if max_k is None else max_k
    if k > limit:
        raise TooLargeError(f"k={k} exceeds the enumeration guard {limit}")
    for mask in range(1 << k):
        yield Hypothesis(mask, k)


@dataclass(frozen=True)
class RegionEstimator:
    """One subset of the parameter space per observable value x."""

    regions: tuple[Hypothesis, ...]

    @classmethod
    def from_member_lists(cls, k: int, lists: Sequence[Iterable[int]]) -> "RegionEstimator":
        return cls(tuple(Hypothesis.from_members(k, members) for members in lists))

    @property
    def k(self) -> int:
        return self.regions[0].k

    @property
    def x_size(self) -> int:
        return len(self.regions)

    def region(self, x: int) -> Hypothesis:
        return self.regions[x]

    def empty_indices(self) -> tuple[int, ...]:
        """Observations mapped to the empty set (disallowed for coherent use)."""
        return tuple(x for x, r in enumerate(self.regions) if r.is_empty)


def hpd(dist: Sequence[Fraction], level: Fraction) -> Hypothesis:
    """Highest-density subset: the points whose mass is >= `level`.

    The comparison is non-strict, so points exactly at the level are included;
    the level must be positive, which keeps zero-mass points out of every
    highest-density set.
    """
    if level <= 0:
        raise ValueError("hpd level must be > 0")
    k = len(dist)
    mask = 0
    for i, p in enumerate(dist):
        if p >= level:
            mask |= 1 << i
    return Hypothesis(mask, k)


def is_hpd(region: Hypothesis, dist: Sequence[Fraction]) -> bool:
    """Is `region` a highest-density set of `dist` at some positive level?

    Equal-mass points must be all in or all out, so a nonempty region
    qualifies exactly when its minimum mass is positive and strictly above
    every mass outside it.  The empty region qualifies trivially (any level
    above the maximum mass realizes it).
    """
    if region.k != len(dist):
        raise ValueError(f"region ambient size {region.k} != len(dist) {len(dist)}")
    if region.is_empty:
        return True
    inside = [dist[i] for i in region]
    lowest_in = min(inside)
    if lowest_in <= 0:
        return False
    outside = [dist[i] for i in region.complement()]
    return not outside or max(outside) < lowest_in
