"""Systems of staircases and staircase functions on FIN_k.

Staircase functions are joins of the atoms ``min_i``, ``max_i``, ``θ⁰_{i,l}``,
``θ¹_{i,l}`` and ``θ²_l``.  A :class:`StairFunction` stores the normal-form
parameters ``(I0, J0 -> l, θ², I1, J1 -> l)``; its atoms always evaluate to
restrictions of the input, so on an sos the join is a disjoint union.
"""
from __future__ import annotations

import functools
import itertools
import json
import re
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import AtomOverlap, EncodingError, LevelMismatch, OutOfRange
from .finvec import BlockSequence, KVector, _kv, span_enumerate, tetris

REFERENCE_LENGTH = 4

MIN, MAX, THETA0, THETA1, THETA2 = "min", "max", "theta0", "theta1", "theta2"
_KIND_ORDER = {MIN: 0, THETA0: 1, THETA2: 2, MAX: 3, THETA1: 4}


def _profile(x: KVector):
    """``(mins, maxs)`` indexed 1..k; undefined entries read as 0."""
    k = x.level
    mins = [0] * (k + 2)
    maxs = [0] * (k + 2)
    seen = [False] * (k + 2)
    for p, v in x.entries:
        if not seen[v]:
            mins[v] = p
            seen[v] = True
        maxs[v] = p
    return mins, maxs


def _interval_values(x: KVector, lo: int, hi: int) -> set:
    """Range of ``x`` restricted to the closed interval ``[lo, hi]``, zeros included."""
    if hi < lo:
        return set()
    vals = set()
    count = 0
    for p, v in x.entries:
        if p > hi:
            break
        if p >= lo:
            vals.add(v)
            count += 1
    if count < hi - lo + 1:
        vals.add(0)
    return vals


def sos_violation(x: KVector) -> str | None:
    """Name of the first failed sos clause, or None if ``x`` is an sos.

    The lower/upper clauses for ``i = 1`` would need ``min_0``/``max_0`` and
    are skipped.  The level-0 zero vector counts as an sos (all clauses vacuous).
    """
    k = x.level
    if k == 0:
        return None
    present = {v for _, v in x.entries}
    for v in range(1, k + 1):
        if v not in present:
            return f"range: value {v} missing"
    mins, maxs = _profile(x)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if not mins[i] < mins[j] < maxs[i]:
                return f"order: min_{i} < min_{j} < max_{i} fails"
    for i in range(2, k + 1):
        want = set(range(i))
        if _interval_values(x, mins[i - 1], mins[i] - 1) != want:
            return f"lower({i}): range of [min_{i - 1}, min_{i}) is not 0..{i - 1}"
        if _interval_values(x, maxs[i] + 1, maxs[i - 1]) != want:
            return f"upper({i}): range of (max_{i}, max_{i - 1}] is not 0..{i - 1}"
    if _interval_values(x, mins[k], maxs[k]) != set(range(k + 1)):
        return f"middle: range of [min_{k}, max_{k}] is not 0..{k}"
    return None


def is_sos(x: KVector) -> bool:
    return sos_violation(x) is None


def strong_decomposition(x: KVector) -> list | None:
    """Split ``x`` into the 2k-1 ordered pieces of a strong sos, or None.

    Piece ``j`` (1-based) must be an sos at level ``k - |k - j|``; the middle
    piece stands for ``w⁰_k + w¹_k``.
    """
    k = x.level
    if k == 0:
        return []
    if not is_sos(x):
        return None
    levels = [k - abs(k - j) for j in range(1, 2 * k)]
    entries = x.entries
    n = len(entries)

    @functools.lru_cache(maxsize=None)
    def rec(piece: int, start: int):
        if piece == len(levels):
            return () if start == n else None
        remaining = len(levels) - piece - 1
        for end in range(start + 1, n - remaining + 1):
            chunk = entries[start:end]
            if max(v for _, v in chunk) != levels[piece]:
                continue
            vec = _kv(levels[piece], chunk)
            if not is_sos(vec):
                continue
            rest = rec(piece + 1, end)
            if rest is not None:
                return (vec,) + rest
        return None

    found = rec(0, 0)
    return None if found is None else list(found)


def is_sos_sequence(X: BlockSequence, strong: bool = False) -> bool:
    if strong:
        return all(strong_decomposition(b) is not None for b in X.blocks)
    return all(is_sos(b) for b in X.blocks)


def sos_pattern(k: int) -> list:
    """Dense value profile of the minimal-width level-k sos.

    Lower staircase: for i = 2..k the run ``i-1, 0, 1, ..., i-2``; then the
    middle ``k, 0, 1, ..., k-1, k``; then the mirror image of the lower part.
    For k = 2 this is ``1,0,2,0,1,2,0,1``; for k = 1 it is ``1,0,1``.
    """
    if k < 1:
        raise OutOfRange("sos patterns need k >= 1")
    vals = []
    for i in range(2, k + 1):
        vals += [i - 1, 0] + list(range(1, i - 1))
    vals += [k, 0] + list(range(1, k)) + [k]
    for i in range(k, 1, -1):
        vals += [0] + list(range(1, i - 1)) + [i - 1]
    return vals


def _strong_pattern(k: int) -> list:
    base = sos_pattern(k)
    vals = []
    for j in range(1, 2 * k + 1):
        # pieces T^{k-1}w_1, ..., w⁰_k, w¹_k, ..., T^{k-1}w_{2k-1}
        shift = k - j if j <= k else j - k - 1
        vals += [max(v - shift, 0) for v in base]
    return vals


def make_sos(k: int, count: int, strong: bool = False, origin: int = 0) -> BlockSequence:
    """``count`` consecutive copies of the fixed sos pattern starting at ``origin``."""
    pattern = _strong_pattern(k) if strong else sos_pattern(k)
    width = len(pattern)
    blocks = tuple(KVector.from_values(pattern, origin + n * width) for n in range(count))
    return BlockSequence(k, blocks)


# -- atoms ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StairAtom:
    kind: str
    level: int
    i: int = 0
    l: int = 0

    def __post_init__(self):
        k = self.level
        if self.kind in (MIN, MAX):
            ok = 1 <= self.i <= k
        elif self.kind in (THETA0, THETA1):
            ok = 1 <= self.i <= k - 1 and 1 <= self.l <= self.i
        elif self.kind == THETA2:
            ok = 0 <= self.l <= k
        else:
            raise EncodingError(f"unknown atom kind {self.kind!r}")
        if not ok:
            raise OutOfRange(f"atom {self} outside its parameter range")

    @property
    def is_trivial(self) -> bool:
        return self.kind == THETA2 and self.l == 0

    def __str__(self):
        if self.kind in (MIN, MAX):
            return f"{self.kind}_{self.i}"
        if self.kind == THETA2:
            return f"theta2_{self.l}"
        return f"{self.kind}_{self.i},{self.l}"


def _atom_output(a: StairAtom, w: KVector, mins, maxs) -> tuple:
    kind = a.kind
    if kind == MIN:
        return ((mins[a.i], a.i),)
    if kind == MAX:
        return ((maxs[a.i], a.i),)
    if kind == THETA0:
        lo, hi, l = mins[a.i], mins[a.i + 1], a.l
    elif kind == THETA1:
        lo, hi, l = maxs[a.i + 1], maxs[a.i], a.l
    else:
        if a.l == 0:
            return ()
        lo, hi, l = mins[a.level], maxs[a.level], a.l
    return tuple((p, v) for p, v in w.entries if lo < p < hi and v == l)


def eval_atom(a: StairAtom, w: KVector) -> KVector:
    if w.level != a.level:
        raise LevelMismatch(f"atom at level {a.level}, vector at level {w.level}")
    mins, maxs = _profile(w)
    out = _atom_output(a, w, mins, maxs)
    return _kv(max((v for _, v in out), default=0), out)


# -- staircase functions -----------------------------------------------------------


@dataclass(frozen=True)
class StairFunction:
    """Normal form ``min_{I0} ∨ ⋁θ⁰_{j-1,l_j} ∨ θ²_l ∨ max_{I1} ∨ ⋁θ¹_{j-1,l_j}``.

    ``theta0``/``theta1`` hold the ``(j, l_j)`` pairs for ``j`` in ``J0``/``J1``.
    """

    level: int
    I0: frozenset = frozenset()
    theta0: tuple = ()
    theta2: int | None = None
    I1: frozenset = frozenset()
    theta1: tuple = ()
    _atoms: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        k = self.level
        if k < 1:
            raise OutOfRange("staircase functions need k >= 1")
        object.__setattr__(self, "I0", frozenset(self.I0))
        object.__setattr__(self, "I1", frozenset(self.I1))
        object.__setattr__(self, "theta0", tuple(sorted((int(j), int(l)) for j, l in self.theta0)))
        object.__setattr__(self, "theta1", tuple(sorted((int(j), int(l)) for j, l in self.theta1)))
        for I, pairs in ((self.I0, self.theta0), (self.I1, self.theta1)):
            if not I <= set(range(1, k + 1)):
                raise OutOfRange(f"index set {sorted(I)} not inside 1..{k}")
            js = [j for j, _ in pairs]
            if len(set(js)) != len(js):
                raise EncodingError("each j carries one theta parameter")
            for j, l in pairs:
                if j not in I or j - 1 not in I:
                    raise EncodingError(f"theta index {j} needs {j - 1} and {j} in the index set")
                if not 1 <= l <= j - 1:
                    raise OutOfRange(f"theta parameter l={l} outside 1..{j - 1}")
        if self.theta2 is not None and not 0 <= self.theta2 <= k:
            raise OutOfRange(f"theta2 parameter {self.theta2} outside 0..{k}")
        atoms = [StairAtom(MIN, k, i) for i in sorted(self.I0)]
        atoms += [StairAtom(THETA0, k, j - 1, l) for j, l in self.theta0]
        if self.theta2 is not None:
            atoms.append(StairAtom(THETA2, k, 0, self.theta2))
        atoms += [StairAtom(MAX, k, i) for i in sorted(self.I1)]
        atoms += [StairAtom(THETA1, k, j - 1, l) for j, l in self.theta1]
        object.__setattr__(self, "_atoms", tuple(atoms))

    @property
    def atoms(self) -> tuple:
        return self._atoms

    @property
    def J0(self) -> frozenset:
        return frozenset(j for j, _ in self.theta0)

    @property
    def J1(self) -> frozenset:
        return frozenset(j for j, _ in self.theta1)

    @property
    def weight(self) -> int:
        """Number of atoms that are not identically zero."""
        return sum(1 for a in self._atoms if not a.is_trivial)

    def is_constant(self) -> bool:
        return self.weight == 0

    def to_text(self) -> str:
        parts = []
        if self.I0:
            parts.append("min{" + ",".join(map(str, sorted(self.I0))) + "}")
        if self.theta0:
            parts.append("theta0{" + "".join(f"({j},{l})" for j, l in self.theta0) + "}")
        if self.theta2 is not None:
            parts.append(f"theta2{{{self.theta2}}}")
        if self.I1:
            parts.append("max{" + ",".join(map(str, sorted(self.I1))) + "}")
        if self.theta1:
            parts.append("theta1{" + "".join(f"({j},{l})" for j, l in self.theta1) + "}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, k: int, text: str) -> "StairFunction":
        text = text.strip()
        kw: dict = {}
        if text in ("", "const"):
            return cls(k)
        pos = 0
        for m in _GROUP_RE.finditer(text):
            if text[pos:m.start()].strip():
                raise EncodingError(f"cannot parse staircase function {text!r}")
            pos = m.end()
            name, body = m.group(1), m.group(2)
            if name in ("min", "max"):
                kw["I0" if name == "min" else "I1"] = {int(t) for t in body.split(",") if t.strip()}
            elif name == "theta2":
                kw["theta2"] = int(body)
            else:
                kw[name] = [(int(a), int(b)) for a, b in _PAIR_RE.findall(body)]
        if text[pos:].strip():
            raise EncodingError(f"cannot parse staircase function {text!r}")
        return cls(k, **kw)

    def to_dict(self) -> dict:
        return {
            "k": self.level,
            "I0": sorted(self.I0),
            "theta0": [list(p) for p in self.theta0],
            "theta2": self.theta2,
            "I1": sorted(self.I1),
            "theta1": [list(p) for p in self.theta1],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StairFunction":
        return cls(
            d["k"],
            frozenset(d.get("I0", ())),
            tuple(tuple(p) for p in d.get("theta0", ())),
            d.get("theta2"),
            frozenset(d.get("I1", ())),
            tuple(tuple(p) for p in d.get("theta1", ())),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self):
        return self.to_text() or "const"


_GROUP_RE = re.compile(r"(min|max|theta0|theta1|theta2)\{([^{}]*)\}")
_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def join(f: StairFunction, g: StairFunction) -> StairFunction:
    """``f ∨ g`` when it stays in normal form (raises otherwise)."""
    if f.level != g.level:
        raise LevelMismatch("joining staircase functions at different levels")
    t0 = dict(f.theta0)
    t1 = dict(f.theta1)
    for src, dst in ((g.theta0, t0), (g.theta1, t1)):
        for j, l in src:
            if dst.get(j, l) != l:
                raise EncodingError(f"two theta parameters for index {j}")
            dst[j] = l
    if f.theta2 is not None and g.theta2 is not None and f.theta2 != g.theta2:
        raise EncodingError("two theta2 parameters")
    th2 = f.theta2 if f.theta2 is not None else g.theta2
    return StairFunction(f.level, f.I0 | g.I0, tuple(t0.items()), th2, f.I1 | g.I1, tuple(t1.items()))


def evaluate(f: StairFunction, w: KVector) -> KVector:
    """Join of the atom values of ``f`` at ``w``."""
    if w.level != f.level:
        raise LevelMismatch(f"function at level {f.level}, vector at level {w.level}")
    mins, maxs = _profile(w)
    merged: dict = {}
    for a in f.atoms:
        for p, v in _atom_output(a, w, mins, maxs):
            if p in merged:
                raise AtomOverlap(f"atoms collide at position {p} of {w}")
            merged[p] = v
    entries = tuple(sorted(merged.items()))
    return _kv(max(merged.values(), default=0), entries)


def induced_relation(f: StairFunction, elements) -> list:
    """Fibers of ``f`` on ``elements`` as index blocks, sorted by least index."""
    classes: dict = {}
    for idx, w in enumerate(elements):
        classes.setdefault(evaluate(f, w), []).append(idx)
    return sorted(classes.values(), key=lambda b: b[0])


# -- enumeration ----------------------------------------------------------------------


def _side_options(k: int) -> list:
    """``(I, ((j, l), ...))`` pairs for one side, canonical order."""
    out = []
    for r in range(k + 1):
        for I in itertools.combinations(range(1, k + 1), r):
            eligible = [j for j in I if j - 1 in I and j >= 3]
            choices = [[None] + list(range(1, j - 1)) for j in eligible]
            for pick in itertools.product(*choices):
                pairs = tuple((j, l) for j, l in zip(eligible, pick) if l is not None)
                out.append((frozenset(I), pairs))
    return out


def raw_stair_functions(k: int) -> list:
    """Every normal-form parameter tuple, constant map first."""
    sides = _side_options(k)
    theta2 = [None] + list(range(k + 1))
    return [
        StairFunction(k, I0, t0, th, I1, t1)
        for (I0, t0), th, (I1, t1) in itertools.product(sides, theta2, sides)
    ]


def all_atoms(k: int) -> list:
    """Every atom used by some enumerated staircase function."""
    atoms = [StairAtom(MIN, k, i) for i in range(1, k + 1)]
    atoms += [StairAtom(MAX, k, i) for i in range(1, k + 1)]
    for kind in (THETA0, THETA1):
        atoms += [StairAtom(kind, k, j - 1, l) for j in range(3, k + 1) for l in range(1, j - 1)]
    atoms += [StairAtom(THETA2, k, 0, l) for l in range(k + 1)]
    return atoms


def reference_span(k: int, length: int = REFERENCE_LENGTH) -> list:
    """Elements used to tell staircase relations apart."""
    return [w for w, _ in span_enumerate(make_sos(k, length, strong=True))]


def atom_table(atoms, elements) -> np.ndarray:
    """``ids[a, e]``: integer id of atom ``a``'s value at element ``e``."""
    ids = np.zeros((len(atoms), len(elements)), dtype=np.int32)
    profiles = [_profile(w) for w in elements]
    for r, a in enumerate(atoms):
        seen: dict = {}
        for c, w in enumerate(elements):
            out = _atom_output(a, w, *profiles[c])
            ids[r, c] = seen.setdefault(out, len(seen))
    return ids


def relation_signatures(functions, elements) -> list:
    """Canonical partition labels (bytes) of every function on ``elements``.

    Atom values on an sos have disjoint supports and each atom is recoverable
    from the join, so equal joins are exactly equal atom-value tuples; the
    kernel therefore refines partitions atom by atom.
    """
    if not functions:
        return []
    k = functions[0].level
    atoms = all_atoms(k)
    index = {a: i for i, a in enumerate(atoms)}
    for f in functions:
        for a in f.atoms:
            if a not in index:
                index[a] = len(atoms)
                atoms.append(a)
    ids = atom_table(atoms, elements)
    flat, offsets = [], [0]
    for f in functions:
        flat.extend(index[a] for a in f.atoms)
        offsets.append(len(flat))
    labels = _kernels.partition_labels(
        ids, np.asarray(offsets, dtype=np.int64), np.asarray(flat, dtype=np.int32)
    )
    return [row.tobytes() for row in labels]


@dataclass
class RelationClass:
    representative: StairFunction
    members: list
    signature: bytes


@functools.lru_cache(maxsize=None)
def stair_relation_classes(k: int, reference_length: int = REFERENCE_LENGTH) -> tuple:
    """Raw functions grouped by induced partition of the reference span.

    Classes appear in order of their first raw member; the representative is
    the member with the most nonzero atoms (earliest on ties).
    """
    raw = raw_stair_functions(k)
    sigs = relation_signatures(raw, reference_span(k, reference_length))
    groups: dict = {}
    for f, sig in zip(raw, sigs):
        groups.setdefault(sig, []).append(f)
    out = []
    for sig, members in groups.items():
        rep = members[0]
        for f in members[1:]:
            if f.weight > rep.weight:
                rep = f
        out.append(RelationClass(rep, members, sig))
    return tuple(out)


def enumerate_stair_functions(
    k: int, dedupe: bool = True, reference_length: int = REFERENCE_LENGTH
) -> list:
    if k < 1:
        raise OutOfRange("k must be >= 1")
    if not dedupe:
        return raw_stair_functions(k)
    return [c.representative for c in stair_relation_classes(k, reference_length)]


def full_function(k: int) -> StairFunction:
    """Every min and max atom, top theta parameters and ``θ²_k``.

    For k = 1 this is ``min ∨ θ²_1 ∨ max``, the identity relation.
    """
    full = frozenset(range(1, k + 1))
    thetas = tuple((j, j - 2) for j in range(3, k + 1))
    return StairFunction(k, full, thetas, k, full, thetas)


def tetris_preserves_sos(x: KVector) -> bool:
    return is_sos(tetris(x, 1))
