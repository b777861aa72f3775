"""Exhaustive search for a reduct on which a coloring is canonical."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from ..errors import AtomOverlap, FinkError, OverlappingSupports
from ..finvec import BlockSequence, iter_approximations, leq, skeleton_key
from ..results import Exhausted
from ..staircase import evaluate, is_sos_sequence
from .front import Coloring
from .maps import CanonicalMap, apply_canonical, enumerate_canonical_maps, group_input

THEOREM1 = "theorem1"
THEOREM2 = "theorem2"


@dataclass
class Canonized:
    Y: BlockSequence
    maps: dict  # arity -> CanonicalMap
    tested: int = 0

    @property
    def map(self) -> CanonicalMap:
        if len(self.maps) != 1:
            raise FinkError("front has members of several arities; use .maps")
        return next(iter(self.maps.values()))

    def to_dict(self) -> dict:
        return {
            "status": "found",
            "Y": self.Y.encode(),
            "maps": {str(d): m.to_dict() for d, m in sorted(self.maps.items())},
            "tested": self.tested,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict, level: int) -> "Canonized":
        maps = {int(a): CanonicalMap.from_dict(m) for a, m in d["maps"].items()}
        return cls(BlockSequence.from_json(d["Y"], level), maps, d.get("tested", 0))


def _maps_for(k: int, d: int) -> list:
    if d == 0:
        return [CanonicalMap(k, 0, ())]
    return enumerate_canonical_maps(k, d)


class _Images:
    """Per-reduct cache of group inputs and staircase values."""

    def __init__(self, members):
        self.members = members
        self._inputs: dict = {}
        self._values: dict = {}

    def image(self, m: CanonicalMap, idx: int) -> tuple:
        out = []
        s = self.members[idx]
        for grp in m.groups:
            key = (grp.coords, grp.shifts, idx)
            w = self._inputs.get(key)
            if w is None:
                w = self._inputs[key] = group_input(grp, s)
            vkey = (grp.g, w)
            v = self._values.get(vkey)
            if v is None:
                v = self._values[vkey] = evaluate(grp.g, w)
            out.append(v)
        return tuple(out)


def _consistent(colors, images) -> bool:
    """``colors[i] == colors[j]  <=>  images[i] == images[j]`` for all i, j."""
    by_color: dict = {}
    by_image: dict = {}
    for col, img in zip(colors, images):
        if by_color.setdefault(col, img) != img:
            return False
        if by_image.setdefault(img, col) != col:
            return False
    return True


def canonize(
    c: Coloring,
    X: BlockSequence | None = None,
    target_len: int = 3,
    mode: str = THEOREM2,
    node_limit: int | None = None,
):
    """First ``(Y, map)`` in canonical order on which ``c`` is canonical.

    Outer loop: length-``target_len`` block subsequences Y of X (index sets
    first, then shifts).  Inner loop: one canonical map per member arity,
    product of the per-arity lists in enumeration order.  Returns
    :class:`Canonized` or :class:`Exhausted`.
    """
    X = c.front.base if X is None else X
    k = X.level
    if mode not in (THEOREM1, THEOREM2):
        raise FinkError(f"unknown mode {mode!r}")
    if not is_sos_sequence(X):
        raise FinkError("canonize needs a base whose blocks are systems of staircases")
    if mode == THEOREM1 and any(len(m) != 1 for m in c.front.members):
        raise FinkError("theorem1 mode needs a front of single-block members")
    candidates = sorted(iter_approximations(X, target_len), key=lambda p: skeleton_key(p[1]))
    tested = 0
    for Y, _ in candidates:
        members = c.front.restrict(Y).members
        colors = [c(s) for s in members]
        arities = sorted({len(s) for s in members})
        per_arity = [_maps_for(k, d) for d in arities]
        cache = _Images(members)
        for combo in itertools.product(*per_arity):
            tested += 1
            if node_limit is not None and tested > node_limit:
                return Exhausted("node_limit", tested - 1, bounds=_bounds(X, target_len, mode))
            chosen = dict(zip(arities, combo))
            try:
                images = [cache.image(chosen[len(s)], i) for i, s in enumerate(members)]
            except (AtomOverlap, OverlappingSupports):
                continue
            if _consistent(colors, images):
                if not chosen:
                    chosen = {c.front.rank or 0: _maps_for(k, c.front.rank or 0)[0]}
                return Canonized(Y, chosen, tested)
    return Exhausted("exhausted", tested, bounds=_bounds(X, target_len, mode))


def _bounds(X, target_len, mode) -> dict:
    return {"base_blocks": len(X), "target_len": target_len, "mode": mode}


def verify_canonical(c: Coloring, Y: BlockSequence, maps: dict) -> bool:
    """Independent pairwise check of the biconditional on ``F↾Y``."""
    members = [s for s in c.front.members if leq(s, Y)]
    images = [tuple(apply_canonical(maps[len(s)], s)) for s in members]
    colors = [c(s) for s in members]
    n = len(members)
    for i in range(n):
        for j in range(i + 1, n):
            if (colors[i] == colors[j]) != (images[i] == images[j]):
                return False
    return True

