"""Canonical maps: staircase functions applied to tetris-sums of coordinate groups.

A map of arity d sends ``(t_0, ..., t_{d-1})`` to
``(g_0(T^{a} t_{i} + T^{b} t_{j} + ...), ...)``; every coordinate appears in
at most one group, each group's shifts have minimum 0 and the groups are
listed by least coordinate.
"""
from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass

from ..errors import EncodingError, LevelMismatch, OutOfRange
from ..finvec import BlockSequence, KVector, block_sum, tetris
from ..staircase import StairFunction, enumerate_stair_functions, evaluate


@dataclass(frozen=True)
class Group:
    coords: tuple
    shifts: tuple
    g: StairFunction

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "shifts", tuple(self.shifts))
        if not self.coords:
            raise EncodingError("empty coordinate group")
        if any(a >= b for a, b in zip(self.coords, self.coords[1:])):
            raise EncodingError("group coordinates must be ascending")
        if len(self.shifts) != len(self.coords):
            raise EncodingError("one shift per coordinate")
        k = self.g.level
        if min(self.shifts) != 0 or max(self.shifts) > k - 1:
            raise OutOfRange(f"shifts {self.shifts} must lie in 0..{k - 1} with minimum 0")

    def to_dict(self) -> dict:
        return {"coords": list(self.coords), "shifts": list(self.shifts), "g": self.g.to_dict()}


@dataclass(frozen=True)
class CanonicalMap:
    level: int
    arity: int
    groups: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        seen = set()
        last = -1
        for grp in self.groups:
            if grp.g.level != self.level:
                raise LevelMismatch("group function at the wrong level")
            if grp.coords[0] <= last:
                raise EncodingError("groups must be ordered by least coordinate")
            last = grp.coords[0]
            for i in grp.coords:
                if i in seen or not 0 <= i < self.arity:
                    raise EncodingError(f"coordinate {i} reused or outside 0..{self.arity - 1}")
                seen.add(i)

    def to_dict(self) -> dict:
        return {"k": self.level, "d": self.arity, "groups": [g.to_dict() for g in self.groups]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d) -> "CanonicalMap":
        if isinstance(d, str):
            d = json.loads(d)
        groups = tuple(
            Group(tuple(g["coords"]), tuple(g["shifts"]), StairFunction.from_dict(g["g"]))
            for g in d["groups"]
        )
        return cls(d["k"], d["d"], groups)

    def __str__(self):
        if not self.groups:
            return "const"
        parts = []
        for grp in self.groups:
            terms = " + ".join(
                f"T^{s}t{i}" if s else f"t{i}" for i, s in zip(grp.coords, grp.shifts)
            )
            parts.append(f"[{grp.g}]({terms})")
        return ", ".join(parts)


def group_input(grp: Group, element: BlockSequence) -> KVector:
    return block_sum(tetris(element.blocks[i], s) for i, s in zip(grp.coords, grp.shifts))


def apply_canonical(m: CanonicalMap, element: BlockSequence) -> list:
    if len(element) != m.arity:
        raise OutOfRange(f"map of arity {m.arity} applied to {len(element)} blocks")
    if m.groups and element.level != m.level:
        raise LevelMismatch("element and map at different levels")
    return [evaluate(grp.g, group_input(grp, element)) for grp in m.groups]


def _group_families(d: int, n_groups: int) -> list:
    """Families of ``n_groups`` disjoint nonempty ascending subsets of ``range(d)``."""
    subsets = [c for r in range(1, d + 1) for c in itertools.combinations(range(d), r)]
    out = []
    for fam in itertools.combinations(subsets, n_groups):
        used = [i for grp in fam for i in grp]
        if len(used) == len(set(used)):
            out.append(tuple(sorted(fam)))
    return sorted(set(out))


def _shift_options(k: int, size: int) -> list:
    return [s for s in itertools.product(range(k), repeat=size) if min(s) == 0]


@functools.lru_cache(maxsize=None)
def _canonical_maps(k: int, d: int) -> tuple:
    funcs = [f for f in enumerate_stair_functions(k) if not f.is_constant()]
    out = []
    for n_groups in range(d + 1):
        for fam in _group_families(d, n_groups):
            shift_lists = [_shift_options(k, len(grp)) for grp in fam]
            for shifts in itertools.product(*shift_lists):
                for gs in itertools.product(funcs, repeat=n_groups):
                    groups = tuple(Group(c, s, g) for c, s, g in zip(fam, shifts, gs))
                    out.append(CanonicalMap(k, d, groups))
    return tuple(out)


def enumerate_canonical_maps(k: int, d: int) -> list:
    """All canonical maps of arity d at level k, in canonical order.

    Order: number of groups, then the coordinate groups, then the shift
    tuples, then the staircase functions (deduped order).  Groups carry only
    non-constant functions, so the constant map is the empty map, listed once.
    """
    if k < 1 or d < 1:
        raise OutOfRange("need k >= 1 and d >= 1")
    return list(_canonical_maps(k, d))


def count_canonical_maps(k: int, d: int) -> int:
    """Closed count of :func:`enumerate_canonical_maps` by shapes x functions."""
    n_funcs = len(enumerate_stair_functions(k)) - 1
    total = 0
    for n_groups in range(d + 1):
        for fam in _group_families(d, n_groups):
            ways = 1
            for grp in fam:
                r = len(grp)
                ways *= k**r - (k - 1) ** r
            total += ways * n_funcs**n_groups
    return total
