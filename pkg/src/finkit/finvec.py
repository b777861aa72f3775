"""FIN_k vectors, the tetris operation, combinatorial spans and block subsequences.

A k-vector is stored sparsely as an ascending tuple of ``(position, value)``
pairs with values in ``1..k``.  Level 0 is reserved for the zero vector so that
repeated tetris shifts never fail.

Canonical order
---------------
Every element of a span is identified by its :class:`SpanTerm`, the list of
``(block index, shift)`` pairs that builds it.  Span elements and block
subsequences are always produced in lexicographic order of
``(index tuple, shift tuple)`` per block, which makes "least witness"
well defined for all the search engines built on top of this module.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from ._kernels import SpanIndex
from .errors import (
    EmptyInput,
    EncodingError,
    LevelMismatch,
    OutOfRange,
    OverlappingSupports,
)

INFINITY = math.inf
MAX_POSITION = 2**63 - 1


@dataclass(frozen=True, slots=True)
class KVector:
    level: int
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple((int(p), int(v)) for p, v in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.level < 0:
            raise OutOfRange(f"negative level {self.level}")
        last = -1
        top = 0
        for p, v in entries:
            if p <= last:
                raise EncodingError("positions must be strictly ascending")
            if not 0 <= p <= MAX_POSITION:
                raise OutOfRange(f"position {p} out of range")
            if not 1 <= v <= self.level:
                raise OutOfRange(f"value {v} outside 1..{self.level}")
            last = p
            top = max(top, v)
        if self.level >= 1 and top != self.level:
            raise EncodingError(f"a level-{self.level} vector must attain {self.level}")

    @classmethod
    def zero(cls) -> "KVector":
        return _kv(0, ())

    @classmethod
    def from_dict(cls, level: int, mapping: dict) -> "KVector":
        return cls(level, tuple(sorted((p, v) for p, v in mapping.items() if v)))

    @classmethod
    def from_values(cls, values: Sequence[int], origin: int = 0) -> "KVector":
        """Dense constructor: ``values[i]`` is the value at ``origin + i``."""
        entries = tuple((origin + i, v) for i, v in enumerate(values) if v)
        return cls(max(values, default=0), entries)

    @property
    def support(self) -> tuple:
        return tuple(p for p, _ in self.entries)

    @property
    def min_support(self):
        return self.entries[0][0] if self.entries else None

    @property
    def max_support(self):
        return self.entries[-1][0] if self.entries else None

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def value(self, pos: int) -> int:
        for p, v in self.entries:
            if p == pos:
                return v
            if p > pos:
                break
        return 0

    def pairs(self) -> frozenset:
        return frozenset(self.entries)

    def precedes(self, other: "KVector") -> bool:
        """Block order ``x < y``: max supp x < min supp y."""
        if self.is_zero or other.is_zero:
            return True
        return self.entries[-1][0] < other.entries[0][0]

    def translate(self, offset: int) -> "KVector":
        return _kv(self.level, tuple((p + offset, v) for p, v in self.entries))

    def encode(self) -> str:
        body = ",".join(f"{p}:{v}" for p, v in self.entries)
        return f"{self.level}:{{{body}}}"

    @classmethod
    def parse(cls, text: str) -> "KVector":
        m = _VEC_RE.match(text)
        if not m:
            raise EncodingError(f"cannot parse k-vector {text!r}")
        level = int(m.group(1))
        body = m.group(2).strip()
        entries = []
        if body:
            for item in body.split(","):
                try:
                    p, v = item.split(":")
                    entries.append((int(p), int(v)))
                except ValueError:
                    raise EncodingError(f"bad entry {item!r} in {text!r}") from None
        return cls(level, tuple(entries))

    def __str__(self):
        return self.encode()

    def __repr__(self):
        return f"KVector({self.encode()!r})"


_VEC_RE = re.compile(r"^\s*(\d+)\s*:\s*\{([^{}]*)\}\s*$")


def _kv(level: int, entries: tuple) -> KVector:
    # trusted constructor, skips validation
    obj = object.__new__(KVector)
    object.__setattr__(obj, "level", level)
    object.__setattr__(obj, "entries", entries)
    return obj


@dataclass(frozen=True, slots=True)
class BlockSequence:
    level: int
    blocks: tuple = ()

    def __post_init__(self):
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.level < 1:
            raise OutOfRange("block sequences live at level >= 1")
        for b in blocks:
            if not isinstance(b, KVector):
                raise TypeError(f"block {b!r} is not a KVector")
            if b.level != self.level:
                raise LevelMismatch(f"block {b} is not at level {self.level}")
        for a, b in zip(blocks, blocks[1:]):
            if not a.max_support < b.min_support:
                raise EncodingError(f"blocks {a} and {b} are not in block order")

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return _bs(self.level, self.blocks[item])
        return self.blocks[item]

    @property
    def max_support(self):
        return self.blocks[-1].max_support if self.blocks else None

    def pairs(self) -> frozenset:
        return frozenset(e for b in self.blocks for e in b.entries)

    def is_prefix_of(self, other: "BlockSequence") -> bool:
        """``self ⊑ other``."""
        n = len(self.blocks)
        return n <= len(other.blocks) and other.blocks[:n] == self.blocks

    def append(self, block: KVector) -> "BlockSequence":
        return BlockSequence(self.level, self.blocks + (block,))

    def encode(self) -> list:
        return [b.encode() for b in self.blocks]

    def to_json(self) -> str:
        return json.dumps(self.encode())

    @classmethod
    def from_json(cls, data, level: int | None = None) -> "BlockSequence":
        if isinstance(data, str):
            data = json.loads(data)
        blocks = tuple(KVector.parse(s) for s in data)
        return cls(_infer_level(blocks, level), blocks)

    @classmethod
    def parse(cls, text: str, level: int | None = None) -> "BlockSequence":
        """Accept a JSON array of vector strings or whitespace-separated vectors."""
        text = text.strip()
        if text.startswith("["):
            return cls.from_json(text, level)
        blocks = tuple(KVector.parse(tok) for tok in text.split())
        return cls(_infer_level(blocks, level), blocks)

    def __str__(self):
        return "(" + ", ".join(b.encode() for b in self.blocks) + ")"


def _infer_level(blocks, level):
    if level is None:
        if not blocks:
            raise EncodingError("level is required for an empty block sequence")
        level = blocks[0].level
    return level


def _bs(level: int, blocks: tuple) -> BlockSequence:
    obj = object.__new__(BlockSequence)
    object.__setattr__(obj, "level", level)
    object.__setattr__(obj, "blocks", blocks)
    return obj


@dataclass(frozen=True, slots=True)
class SpanTerm:
    """Witness ``T^{s_0} x_{i_0} + ... + T^{s_m} x_{i_m}`` as ``((i_0, s_0), ...)``."""

    parts: tuple

    def __post_init__(self):
        parts = tuple((int(i), int(s)) for i, s in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise EmptyInput("a span term needs at least one part")
        idx = [i for i, _ in parts]
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise EncodingError("span term indices must be strictly ascending")
        if min(s for _, s in parts) != 0:
            raise EncodingError("a span term needs an unshifted part")

    @property
    def indices(self) -> tuple:
        return tuple(i for i, _ in self.parts)

    @property
    def shifts(self) -> tuple:
        return tuple(s for _, s in self.parts)

    @property
    def key(self) -> tuple:
        return (self.indices, self.shifts)

    def __str__(self):
        return " + ".join(f"T^{s}x{i}" if s else f"x{i}" for i, s in self.parts)

    @classmethod
    def parse(cls, text: str) -> "SpanTerm":
        """Inverse of ``str``: ``"T^1x0 + x1"`` -> ``((0, 1), (1, 0))``."""
        parts = []
        for piece in text.split("+"):
            m = _TERM_RE.match(piece)
            if not m:
                raise EncodingError(f"cannot parse span term piece {piece!r}")
            parts.append((int(m.group(2)), int(m.group(1) or 0)))
        return cls(tuple(sorted(parts)))


_TERM_RE = re.compile(r"^\s*(?:T\^(\d+)\s*)?x_?(\d+)\s*$")


def tetris(x: KVector, i: int = 1) -> KVector:
    """``T^i x``: subtract ``i`` pointwise, clamping at 0."""
    if i < 0:
        raise OutOfRange(f"negative tetris exponent {i}")
    if i == 0:
        return x
    level = max(x.level - i, 0)
    return _kv(level, tuple((p, v - i) for p, v in x.entries if v > i))


def block_sum(parts: Iterable[KVector]) -> KVector:
    parts = list(parts)
    if not parts:
        raise EmptyInput("block_sum of an empty list")
    if len(parts) == 1:
        return parts[0]
    merged: dict = {}
    for x in parts:
        for p, v in x.entries:
            if p in merged:
                raise OverlappingSupports(f"position {p} occurs in two parts")
            merged[p] = v
    return _kv(max(x.level for x in parts), tuple(sorted(merged.items())))


def restrict(X: BlockSequence, n: int) -> BlockSequence:
    """``r_n(X)``, the first ``n`` blocks."""
    if not 0 <= n <= len(X):
        raise OutOfRange(f"cannot restrict a length-{len(X)} sequence to {n}")
    return _bs(X.level, X.blocks[:n])


def tail(X: BlockSequence, s: BlockSequence, t: BlockSequence | None = None) -> BlockSequence:
    """``X/s`` (or ``X/(s,t)``): blocks of X lying entirely after s."""
    for other in (s, t):
        if other is not None and other.level != X.level:
            raise LevelMismatch("tail of sequences at different levels")
    out = X
    for other in (s, t):
        if other is None or not other.blocks:
            continue
        cut = other.max_support
        out = _bs(X.level, tuple(b for b in out.blocks if b.min_support > cut))
    return out


def unit_blocks(k: int, m: int, origin: int = 0) -> BlockSequence:
    """``x_i = [origin + i : k]`` for ``i < m``."""
    return BlockSequence(k, tuple(_kv(k, ((origin + i, k),)) for i in range(m)))


# -- spans ------------------------------------------------------------------


def _index_tuples(start: int, m: int) -> Iterator[tuple]:
    for i in range(start, m):
        yield (i,)
        for rest in _index_tuples(i + 1, m):
            yield (i,) + rest


def _shift_tuples(k: int, r: int) -> list:
    return [s for s in itertools.product(range(k), repeat=r) if 0 in s]


class _SpanTable:
    """Per-base cache of tetris images and span elements grouped by first index."""

    def __init__(self, X: BlockSequence):
        self.X = X
        k = X.level
        self.shifted = [[tetris(b, i).entries for i in range(k)] for b in X.blocks]
        self._shift_cache: dict = {}
        self._by_first: dict = {}

    def shift_tuples(self, r: int) -> list:
        if r not in self._shift_cache:
            self._shift_cache[r] = _shift_tuples(self.X.level, r)
        return self._shift_cache[r]

    def by_first(self, i: int) -> list:
        """Span elements whose least block index is ``i``, in canonical order."""
        got = self._by_first.get(i)
        if got is None:
            got = []
            k = self.X.level
            m = len(self.X.blocks)
            for idx in itertools.chain([(i,)], ((i,) + r for r in _index_tuples(i + 1, m))):
                for sh in self.shift_tuples(len(idx)):
                    entries = ()
                    for b, s in zip(idx, sh):
                        entries += self.shifted[b][s]
                    got.append((_kv(k, entries), SpanTerm(tuple(zip(idx, sh)))))
            self._by_first[i] = got
        return got

    def iter_from(self, start: int) -> Iterator[tuple]:
        for i in range(start, len(self.X.blocks)):
            yield from self.by_first(i)


def iter_span(X: BlockSequence, start: int = 0) -> Iterator[tuple]:
    """Yield ``(vector, SpanTerm)`` for span elements built from blocks ``>= start``."""
    return _SpanTable(X).iter_from(start)


def span_enumerate(X: BlockSequence) -> list:
    return list(iter_span(X))


def span_size(k: int, m: int) -> int:
    """Closed-form count of span elements of ``m`` blocks at level ``k``."""
    return sum(math.comb(m, r) * (k**r - (k - 1) ** r) for r in range(1, m + 1))


def span_contains(X: BlockSequence, w: KVector) -> SpanTerm | None:
    """Return the unique witness term of ``w`` in ``<X>``, or None."""
    if w.level != X.level:
        raise LevelMismatch(f"vector at level {w.level}, sequence at level {X.level}")
    if not w.entries or not X.blocks:
        return None
    k = X.level
    mins = [b.entries[0][0] for b in X.blocks]
    entries = w.entries
    n = len(entries)
    parts = []
    j = 0
    while j < n:
        p = entries[j][0]
        b = bisect_right(mins, p) - 1
        if b < 0:
            return None
        block = X.blocks[b]
        hi = block.entries[-1][0]
        if p > hi:
            return None
        j2 = j
        top = 0
        while j2 < n and entries[j2][0] <= hi:
            top = max(top, entries[j2][1])
            j2 += 1
        shift = k - top
        if shift < 0 or tetris(block, shift).entries != entries[j:j2]:
            return None
        parts.append((b, shift))
        j = j2
    if min(s for _, s in parts) != 0:
        return None
    return SpanTerm(tuple(parts))


def span_contains_many(X: BlockSequence, vectors: Sequence[KVector]) -> list:
    """Batch :func:`span_contains` through the kernel backend."""
    for w in vectors:
        if w.level != X.level:
            raise LevelMismatch(f"vector at level {w.level}, sequence at level {X.level}")
    ok, shifts = SpanIndex(X).decompose(list(vectors))
    out = []
    for q in range(len(vectors)):
        if not ok[q]:
            out.append(None)
            continue
        row = shifts[q]
        out.append(SpanTerm(tuple((b, int(row[b])) for b in range(len(row)) if row[b] >= 0)))
    return out


def block_witnesses(X: BlockSequence, Y: BlockSequence) -> tuple | None:
    """Witness terms showing ``X <= Y`` block by block, or None."""
    if X.level != Y.level:
        raise LevelMismatch("comparing sequences at different levels")
    out = []
    for x in X.blocks:
        term = span_contains(Y, x)
        if term is None:
            return None
        out.append(term)
    return tuple(out)


def leq(X: BlockSequence, Y: BlockSequence, finalized: bool = False) -> bool:
    """``X <= Y`` (block subsequence); with ``finalized`` the relation ``<=_fin``."""
    terms = block_witnesses(X, Y)
    if terms is None:
        return False
    if not finalized:
        return True
    used = max((t.indices[-1] for t in terms), default=-1)
    return used == len(Y) - 1


def depth(X: BlockSequence, s: BlockSequence):
    """Least ``d`` with ``s <=_fin r_d(X)``; ``INFINITY`` when there is none."""
    terms = block_witnesses(s, X)
    if terms is None:
        return INFINITY
    return max((t.indices[-1] for t in terms), default=-1) + 1


# -- approximations ------------------------------------------------------------


def iter_approximations(
    X: BlockSequence, n: int, start: int = 0, table: _SpanTable | None = None
) -> Iterator[tuple]:
    """Yield ``(approximation, terms)`` for length-``n`` block subsequences of X.

    Order is lexicographic on the per-block ``(indices, shifts)`` keys.
    """
    if not 0 <= n <= len(X):
        raise OutOfRange(f"no length-{n} approximations of a length-{len(X)} sequence")
    table = table or _SpanTable(X)
    k = X.level

    def rec(first: int, left: int):
        if left == 0:
            yield (), ()
            return
        m = len(X.blocks)
        # leave room for the remaining blocks, each needs one index
        for i in range(first, m - left + 1):
            for vec, term in table.by_first(i):
                last = term.indices[-1]
                if m - last - 1 < left - 1:
                    continue
                for vecs, terms in rec(last + 1, left - 1):
                    yield (vec,) + vecs, (term,) + terms

    for vecs, terms in rec(start, n):
        yield _bs(k, vecs), terms


def approximations(X: BlockSequence, n: int) -> list:
    """``AX_n`` for finite X: every length-n block subsequence, canonical order."""
    return [s for s, _ in iter_approximations(X, n)]


def iter_block_subsequences(X: BlockSequence, max_len: int | None = None) -> Iterator[tuple]:
    """All nonempty block subsequences of X with at most ``max_len`` blocks.

    Canonical order on the per-block keys; a sequence precedes its extensions.
    """
    table = _SpanTable(X)
    k = X.level
    limit = len(X) if max_len is None else min(max_len, len(X))

    def rec(first: int, vecs: tuple, terms: tuple):
        if len(vecs) == limit:
            return
        for vec, term in table.iter_from(first):
            v2, t2 = vecs + (vec,), terms + (term,)
            yield _bs(k, v2), t2
            yield from rec(term.indices[-1] + 1, v2, t2)

    yield from rec(0, (), ())


def sequence_key(terms: Sequence[SpanTerm]) -> tuple:
    return tuple(t.key for t in terms)


def skeleton_key(terms: Sequence[SpanTerm]) -> tuple:
    """Order used by the search engines: index sets first, shifts as tie-break."""
    return tuple(t.indices for t in terms), tuple(t.shifts for t in terms)
