"""Counts of staircase relations and the recursion for canonical relations of arity d."""
from __future__ import annotations

import functools
from dataclasses import asdict, dataclass
from math import comb

from ..errors import OutOfRange
from ..staircase import stair_relation_classes
from .maps import count_canonical_maps


@dataclass
class CountRow:
    k: int
    d: int
    t: int
    t_prime: int
    t_tilde: int
    C: int
    enumerated: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CountRow":
        return cls(**d)


def stair_counts(k: int) -> tuple:
    """``(t_k, t'_k, t~_k)``; t'_k counts relations whose representative uses θ²_l, l >= 1."""
    classes = stair_relation_classes(k)
    t = len(classes)
    tp = sum(1 for c in classes if (c.representative.theta2 or 0) >= 1)
    return t, tp, k * tp


def c_recursion(t: int, tt: int, d: int) -> int:
    """C_d from t and t~.

    C_2 = t~ and, for d >= 3,
    C_d = sum_{j=2}^{d-2} binom(d,j) t~ (t^{d-j} + C_{d-j}) + d t~ t + t~.
    """
    if d < 2:
        raise OutOfRange("the recursion starts at d = 2")

    @functools.lru_cache(maxsize=None)
    def C(n):
        if n == 2:
            return tt
        total = 0
        for j in range(2, n - 1):
            total += comb(n, j) * tt * t ** (n - j) + comb(n, j) * tt * C(n - j)
        return total + n * tt * t + tt

    return C(d)


def count_canonical(k: int, d: int, compare: bool = False) -> CountRow:
    """The counting row for (k, d).

    With ``compare`` the number of enumerated canonical maps is attached; it
    is reported next to the recursion value, not reconciled with it.
    """
    if k < 1:
        raise OutOfRange("k must be >= 1")
    t, tp, tt = stair_counts(k)
    row = CountRow(k, d, t, tp, tt, c_recursion(t, tt, d))
    if compare:
        row.enumerated = count_canonical_maps(k, d)
    return row
