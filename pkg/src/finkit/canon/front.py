"""Fronts on a finite base and colorings of their members."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from ..errors import EncodingError, FinkError, OutOfRange
from ..finvec import BlockSequence, KVector, _bs, approximations, block_sum, leq, restrict


class Front:
    """A finite family of approximations of ``base``.

    ``rank`` marks the uniform fronts ``AX_n``; their members are computed
    on first use and membership reduces to a length check plus ``leq``.
    """

    def __init__(self, base: BlockSequence, members=None, rank: int | None = None):
        if members is None and rank is None:
            raise FinkError("a front needs members or a rank")
        self.base = base
        self.rank = rank
        self._members = None if members is None else tuple(members)
        self._set = None if members is None else frozenset(self._members)

    @classmethod
    def uniform(cls, X: BlockSequence, n: int) -> "Front":
        if not 0 <= n <= len(X):
            raise OutOfRange(f"no rank-{n} front on a {len(X)}-block base")
        return cls(X, None, n)

    @property
    def members(self) -> tuple:
        if self._members is None:
            self._members = tuple(approximations(self.base, self.rank))
            self._set = frozenset(self._members)
        return self._members

    def __contains__(self, s) -> bool:
        if self._set is None:
            return len(s) == self.rank and s.level == self.base.level and leq(s, self.base)
        return s in self._set

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"Front(base={self.base}, rank={self.rank}, members={len(self)})"

    @property
    def height(self) -> int:
        if self.rank is not None:
            return self.rank
        return max((len(m) for m in self.members), default=0)

    def restrict(self, Y: BlockSequence) -> "Front":
        """``F↾Y``: members that are approximations of ``Y``."""
        if self.rank is not None and len(Y) >= self.rank:
            return Front(Y, None, self.rank)
        return Front(Y, tuple(m for m in self.members if leq(m, Y)), None)

    def extensions(self, s: BlockSequence) -> tuple:
        """``F_s``: members having ``s`` as a prefix."""
        return tuple(m for m in self.members if s.is_prefix_of(m))


@dataclass
class FrontCheck:
    ok: bool
    reason: str = ""
    counterexample: tuple = ()

    def __bool__(self):
        return self.ok


def front_check(F: Front) -> FrontCheck:
    """Antichain and finite-scale cover, both checked exhaustively.

    Cover is tested on every length-h approximation of the base, h being the
    longest member: each needs a prefix in the family.
    """
    for m in F.members:
        if not leq(m, F.base):
            return FrontCheck(False, "not a block subsequence of the base", (m,))
    for m in F.members:
        for j in range(len(m)):
            p = restrict(m, j)
            if p in F:
                return FrontCheck(False, "antichain: a member extends another", (p, m))
    h = F.height
    if h > len(F.base):
        return FrontCheck(False, "member longer than the base", ())
    for Y in approximations(F.base, h):
        if not any(restrict(Y, j) in F for j in range(h + 1)):
            return FrontCheck(False, "cover: approximation with no prefix in the family", (Y,))
    return FrontCheck(True)


@dataclass
class FrontDerived:
    hat: frozenset
    fibers: dict
    front: Front

    def restrict(self, Y: BlockSequence) -> Front:
        return self.front.restrict(Y)


def front_derived(F: Front) -> FrontDerived:
    hat = set()
    fibers: dict = {}
    for m in F.members:
        for j in range(len(m) + 1):
            p = restrict(m, j)
            hat.add(p)
            fibers.setdefault(p, []).append(m)
    return FrontDerived(frozenset(hat), {p: tuple(v) for p, v in fibers.items()}, F)


# -- colorings ------------------------------------------------------------------


def _first_block(s: BlockSequence):
    return s.blocks[0] if s.blocks else None


def _union(s):
    return block_sum(s.blocks) if s.blocks else KVector.zero()


def _min_parity(s):
    b = _first_block(s)
    return 0 if b is None else b.min_support % 2


def _first_value(s):
    b = _first_block(s)
    return 0 if b is None else b.entries[0][1]


def _constant(s):
    return 0


def _identity(s):
    return s


RULES: dict[str, Callable] = {
    "union": _union,
    "constant": _constant,
    "min-parity": _min_parity,
    "first-value": _first_value,
    "identity": _identity,
}


def color_to_json(c):
    if isinstance(c, KVector):
        return c.encode()
    if isinstance(c, BlockSequence):
        return c.encode()
    return c


@dataclass
class Coloring:
    """Either a named rule or an explicit member -> color table."""

    front: Front
    rule: str | None = None
    table: dict | None = None

    def __post_init__(self):
        if (self.rule is None) == (self.table is None):
            raise EncodingError("a coloring needs exactly one of rule/table")
        if self.rule is not None and self.rule not in RULES:
            raise EncodingError(f"unknown coloring rule {self.rule!r}; known: {sorted(RULES)}")
        self._fn = RULES[self.rule] if self.rule else None

    def __call__(self, s: BlockSequence):
        if self._fn is not None:
            return self._fn(s)
        try:
            return self.table[s]
        except KeyError:
            raise FinkError(f"coloring table has no entry for {s}") from None

    def check_total(self) -> bool:
        if self.table is None:
            return True
        return all(m in self.table for m in self.front.members)

    def to_dict(self) -> dict:
        if self.rule is not None:
            return {"rule": self.rule}
        rows = [[m.encode(), color_to_json(c)] for m, c in self.table.items()]
        return {"table": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data, front: Front) -> "Coloring":
        if isinstance(data, str):
            data = json.loads(data)
        if "rule" in data:
            return cls(front, rule=data["rule"])
        if "table" not in data:
            raise EncodingError("coloring JSON needs 'rule' or 'table'")
        k = front.base.level
        table = {}
        for member, color in data["table"]:
            s = BlockSequence.from_json(member, k) if member else _bs(k, ())
            table[s] = tuple(color) if isinstance(color, list) else color
        return cls(front, table=table)

    @classmethod
    def tabulate(cls, front: Front, fn: Callable) -> "Coloring":
        return cls(front, table={m: fn(m) for m in front.members})
