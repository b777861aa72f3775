"""Backtracking search for block subsequences whose rank-n approximations share one color.

Search order
------------
Candidates ``Y`` are ordered by their skeleton (the tuple of SpanTerm index
sets, lexicographically) and then by their shift tuples.  The engine runs a
depth-first search over skeletons; for each partial skeleton it keeps every
shift assignment that is still monochromatic, in lexicographic order, so the
first completed skeleton with a surviving assignment yields the least
witness.  A partial assignment is dropped as soon as two colors appear among
its completed rank-n approximations, which no extension can undo.
"""
from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .canon.front import Coloring, color_to_json
from .errors import OutOfRange
from .finvec import (
    BlockSequence,
    SpanTerm,
    _bs,
    _kv,
    approximations,
    iter_approximations,
    restrict,
    skeleton_key,
    tetris,
)
from .results import Exhausted

_NO_COLOR = object()


@dataclass
class SearchBudget:
    max_universe_blocks: int
    target_length: int
    node_limit: int | None = None
    seed: int | None = None  # accepted for interface parity; the search is deterministic

    def __post_init__(self):
        if self.target_length > self.max_universe_blocks:
            raise OutOfRange("target length exceeds the universe")
        if self.target_length < 0:
            raise OutOfRange("negative target length")


@dataclass
class SearchOutcome:
    sequence: BlockSequence | None
    terms: tuple = ()
    color: object = None
    nodes: int = 0
    prunes: int = 0
    histogram: Counter = field(default_factory=Counter)
    hit_limit: bool = False
    pruned: list = field(default_factory=list)


class _Search:
    def __init__(self, c: Coloring, X: BlockSequence, n: int, target: int, node_limit, trace):
        self.c = c
        self.X = X
        self.n = n
        self.target = target
        self.k = X.level
        self.m = len(X)
        self.node_limit = node_limit
        self.trace = trace
        self.shifted = [[tetris(b, s).entries for s in range(self.k)] for b in X.blocks]
        self.shift_cache: dict = {}
        self.out = SearchOutcome(None)

    def shift_tuples(self, r):
        got = self.shift_cache.get(r)
        if got is None:
            got = self.shift_cache[r] = [
                s for s in itertools.product(range(self.k), repeat=r) if 0 in s
            ]
        return got

    def block(self, idx, sh):
        entries = ()
        for i, s in zip(idx, sh):
            entries += self.shifted[i][s]
        return _kv(self.k, entries)

    def new_colors(self, blocks: tuple):
        """Colors of rank-n approximations of ``blocks`` that use its last block."""
        n = self.n
        L = len(blocks)
        if n == 0 or L < n:
            return set()
        Yp = _bs(self.k, blocks)
        last = L - 1
        colors = set()
        if n == 1:
            prefixes = [((), -1)]
        else:
            prefixes = [
                (s.blocks, t[-1].indices[-1])
                for s, t in iter_approximations(restrict(Yp, last), n - 1)
            ]
        for pblocks, plast in prefixes:
            for r in range(0, last - plast):
                for sub in itertools.combinations(range(plast + 1, last), r):
                    idx = sub + (last,)
                    for sh in self.shift_tuples(len(idx)):
                        entries = ()
                        for i, s in zip(idx, sh):
                            entries += tetris(blocks[i], s).entries
                        v = _kv(self.k, entries)
                        colors.add(self.c(_bs(self.k, pblocks + (v,))))
        return colors

    def index_sets(self, first, remaining):
        """Index tuples for the next block in lexicographic order."""
        top = self.m - remaining  # last index usable while leaving room
        def rec(start):
            for i in range(start, top + 1):
                yield (i,)
                for rest in rec(i + 1):
                    yield (i,) + rest
        return rec(first)

    def run(self, first_sets=None):
        """Search; ``first_sets`` restricts the first block's index set (for fan-out)."""
        if self.target == 0:
            self.out.sequence = _bs(self.k, ())
            self.out.color = self.c(_bs(self.k, ())) if self.n == 0 else None
            return self.out
        root = [((), (), _NO_COLOR)]
        self.dfs((), root, first_sets)
        return self.out

    def dfs(self, skeleton, states, first_sets=None):
        depth = len(skeleton)
        if depth == self.target:
            blocks, terms, color = states[0]
            self.out.sequence = _bs(self.k, blocks)
            self.out.terms = terms
            self.out.color = None if color is _NO_COLOR else color
            return True
        first = skeleton[-1][-1] + 1 if skeleton else 0
        options = first_sets if first_sets is not None else self.index_sets(first, self.target - depth)
        for idx in options:
            nxt = []
            for blocks, terms, color in states:
                for sh in self.shift_tuples(len(idx)):
                    if self.node_limit is not None and self.out.nodes >= self.node_limit:
                        self.out.hit_limit = True
                        return False
                    self.out.nodes += 1
                    self.out.histogram[depth + 1] += 1
                    b2 = blocks + (self.block(idx, sh),)
                    cols = self.new_colors(b2)
                    if color is not _NO_COLOR:
                        cols.add(color)
                    if len(cols) > 1:
                        self.out.prunes += 1
                        if self.trace:
                            self.out.pruned.append(_bs(self.k, b2))
                        continue
                    c2 = next(iter(cols)) if cols else color
                    nxt.append((b2, terms + (SpanTerm(tuple(zip(idx, sh))),), c2))
            if nxt and self.dfs(skeleton + (idx,), nxt):
                return True
            if self.out.hit_limit:
                return False
        return False


def _check_rank(c: Coloring, n: int):
    if c.front.rank is not None and c.front.rank != n:
        raise OutOfRange(f"coloring is on rank-{c.front.rank} approximations, not rank {n}")


def _subtree(args):
    c, X, n, target, idx, trace = args
    return _Search(c, X, n, target, None, trace).run([idx])


def search_homogeneous(
    c: Coloring,
    X: BlockSequence,
    n: int,
    budget: SearchBudget,
    threads: int | None = None,
    trace: bool = False,
) -> SearchOutcome:
    """Full search record; see :func:`find_homogeneous` for the plain interface.

    With ``threads > 1`` the first-block subtrees are explored in worker
    processes and the least witness is chosen afterwards, so the answer
    matches the serial one; statistics are summed up to the winning subtree,
    which reproduces the serial counts.  A node limit forces serial search, since a
    budget cut would otherwise depend on the schedule.
    """
    _check_rank(c, n)
    X = restrict(X, min(budget.max_universe_blocks, len(X)))
    target = budget.target_length
    if target > len(X):
        raise OutOfRange("target length exceeds the universe")
    if n > target:
        raise OutOfRange(f"rank {n} exceeds the target length {target}")
    if threads is None:
        threads = int(os.environ.get("FINKIT_THREADS", "1") or 1)
    if threads <= 1 or budget.node_limit is not None or target == 0:
        return _Search(c, X, n, target, budget.node_limit, trace).run()

    probe = _Search(c, X, n, target, None, False)
    firsts = list(probe.index_sets(0, target))
    total = SearchOutcome(None)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = pool.map(_subtree, [(c, X, n, target, idx, trace) for idx in firsts])
        for res in results:
            total.nodes += res.nodes
            total.prunes += res.prunes
            total.histogram.update(res.histogram)
            total.pruned.extend(res.pruned)
            if res.sequence is not None:
                # later subtrees are never reached by the serial search
                total.sequence, total.terms, total.color = res.sequence, res.terms, res.color
                break
    return total


def find_homogeneous(c: Coloring, X: BlockSequence, n: int, budget: SearchBudget, threads=None):
    """Least Y <= X with ``budget.target_length`` blocks and ``c`` constant on AY_n.

    Returns the BlockSequence, or :class:`Exhausted` with the search statistics.
    """
    out = search_homogeneous(c, X, n, budget, threads)
    if out.sequence is not None:
        return out.sequence
    return exhausted_report(out, X, n, budget)


def exhausted_report(out: SearchOutcome, X, n, budget) -> Exhausted:
    return Exhausted(
        "node_limit" if out.hit_limit else "exhausted",
        out.nodes,
        out.prunes,
        dict(out.histogram),
        {
            "universe_blocks": min(budget.max_universe_blocks, len(X)),
            "target_length": budget.target_length,
            "rank": n,
            "node_limit": budget.node_limit,
        },
    )


def certify_homogeneous(Y: BlockSequence, c: Coloring, n: int) -> bool:
    """Recompute AY_n from scratch and check it is monochromatic."""
    colors = {c(s) for s in approximations(Y, n)}
    return len(colors) <= 1


def naive_homogeneous(c: Coloring, X: BlockSequence, n: int, target: int):
    """Reference oracle: scan every candidate in search order, certify each."""
    for Y, _ in sorted(iter_approximations(X, target), key=lambda p: skeleton_key(p[1])):
        if certify_homogeneous(Y, c, n):
            return Y
    return None


def outcome_to_dict(out: SearchOutcome, X, n, budget) -> dict:
    if out.sequence is None:
        return exhausted_report(out, X, n, budget).to_dict()
    return {
        "status": "found",
        "Y": out.sequence.encode(),
        "terms": [str(t) for t in out.terms],
        "color": color_to_json(out.color),
        "nodes": out.nodes,
        "prunes": out.prunes,
    }

