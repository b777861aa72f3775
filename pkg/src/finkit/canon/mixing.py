"""Separation and mixing of approximations at a finite horizon.

A reduct ``Z`` of the base is *compatible* with ``s`` when some member of the
front extends ``s`` and is itself an approximation of ``Z``.  Only reducts
compatible with both approximations are allowed to separate them; otherwise
every pair would be separated vacuously.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import IncompatibleReduct
from ..finvec import (
    BlockSequence,
    KVector,
    depth,
    iter_block_subsequences,
    iter_span,
    span_contains,
    tail,
)
from .front import Coloring

SEPARATED = "Separated"
MIXED = "MixedAtHorizon"
INCOMPARABLE = "Incomparable"


class _SpanOracle:
    """Memoized block membership in ``<Z>`` for a single reduct."""

    def __init__(self, Z: BlockSequence):
        self.Z = Z
        self._memo: dict = {}

    def has(self, v: KVector) -> bool:
        got = self._memo.get(v)
        if got is None:
            got = self._memo[v] = span_contains(self.Z, v) is not None
        return got

    def admits(self, s: BlockSequence) -> bool:
        return all(self.has(b) for b in s.blocks)


def _extensions_in(members, oracle: _SpanOracle) -> list:
    return [m for m in members if oracle.admits(m)]


def separates(Z: BlockSequence, s: BlockSequence, t: BlockSequence, c: Coloring) -> bool:
    """True when every member extension of s inside Z differs in color from every one of t."""
    oracle = _SpanOracle(Z)
    ext_s = _extensions_in(c.front.extensions(s), oracle)
    ext_t = _extensions_in(c.front.extensions(t), oracle)
    if not ext_s or not ext_t:
        raise IncompatibleReduct(f"reduct {Z} is not compatible with both {s} and {t}")
    return _disjoint_colors(ext_s, ext_t, c)


def _disjoint_colors(ext_s, ext_t, c) -> bool:
    colors = {c(m) for m in ext_s}
    return not any(c(m) in colors for m in ext_t)


@dataclass
class Horizon:
    max_blocks: int
    reducts_scanned: int = 0
    compatible: int = 0

    def to_dict(self) -> dict:
        return {
            "max_blocks": self.max_blocks,
            "reducts_scanned": self.reducts_scanned,
            "compatible": self.compatible,
        }


@dataclass
class MixReport:
    verdict: str
    s: BlockSequence
    t: BlockSequence
    horizon: Horizon
    witness: BlockSequence | None = None
    weak_witness: KVector | None = None
    note: str = ""

    @property
    def weakly_mixed(self) -> bool:
        return self.weak_witness is not None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "s": self.s.encode(),
            "t": self.t.encode(),
            "witness": None if self.witness is None else self.witness.encode(),
            "weak_witness": None if self.weak_witness is None else self.weak_witness.encode(),
            "horizon": self.horizon.to_dict(),
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict, level: int) -> "MixReport":
        def seq(x):
            return None if x is None else BlockSequence.from_json(x, level)

        h = d["horizon"]
        return cls(
            d["verdict"],
            seq(d["s"]),
            seq(d["t"]),
            Horizon(h["max_blocks"], h["reducts_scanned"], h["compatible"]),
            seq(d.get("witness")),
            None if d.get("weak_witness") is None else KVector.parse(d["weak_witness"]),
            d.get("note", ""),
        )


def _weak_candidates(X, s, t) -> list:
    """Vectors of ``<X/s>`` made of pairs in ``t ∖ s``, largest support first."""
    diff = t.pairs() - s.pairs()
    out = [w for w, _ in iter_span(tail(X, s)) if w.pairs() <= diff]
    out.sort(key=lambda w: -len(w.entries))
    return out


def _starts_with(block: KVector, w: KVector) -> bool:
    n = len(w.entries)
    return block.entries[:n] == w.entries


def decide_mixing(
    X: BlockSequence,
    s: BlockSequence,
    t: BlockSequence,
    c: Coloring,
    horizon_blocks: int | None = None,
    weak: bool = True,
) -> MixReport:
    """Scan every reduct of X with at most ``horizon_blocks`` blocks.

    The first compatible reduct (canonical order) that separates s and t is
    returned as the witness.  When none does, the verdict is MixedAtHorizon,
    and a weak-mixing witness ``w ∈ t ∖ s`` is searched for when
    ``depth(s) < depth(t)``.
    """
    hb = len(X) if horizon_blocks is None else min(horizon_blocks, len(X))
    horizon = Horizon(hb)
    ext_s_all = c.front.extensions(s)
    ext_t_all = c.front.extensions(t)
    if s in c.front or t in c.front or not ext_s_all or not ext_t_all:
        return MixReport(INCOMPARABLE, s, t, horizon, note="pair not inside hat(F) minus F")

    compatible = []
    for Z, _ in iter_block_subsequences(X, hb):
        horizon.reducts_scanned += 1
        oracle = _SpanOracle(Z)
        if not (oracle.admits(s) and oracle.admits(t)):
            continue
        ext_s = _extensions_in(ext_s_all, oracle)
        if not ext_s:
            continue
        ext_t = _extensions_in(ext_t_all, oracle)
        if not ext_t:
            continue
        horizon.compatible += 1
        if _disjoint_colors(ext_s, ext_t, c):
            return MixReport(SEPARATED, s, t, horizon, witness=Z)
        compatible.append((ext_s, ext_t))
    if not compatible:
        raise IncompatibleReduct(f"no reduct within {hb} blocks is compatible with {s} and {t}")

    report = MixReport(MIXED, s, t, horizon)
    if weak and depth(X, s) < depth(X, t):
        report.weak_witness = _find_weak_witness(X, s, t, c, compatible)
    return report


def _find_weak_witness(X, s, t, c, compatible):
    pos = len(s)
    for w in _weak_candidates(X, s, t):
        ok = True
        for ext_s, ext_t in compatible:
            colors = {c(m) for m in ext_s if _starts_with(m.blocks[pos], w)}
            if not colors or not any(c(m) in colors for m in ext_t):
                ok = False
                break
        if ok:
            return w
    return None
