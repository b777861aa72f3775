"""Brute-force reference implementations on dense value lists.

Nothing here imports the package's algorithms; vectors are turned into plain
lists and every notion is recomputed straight from its definition.
"""
import itertools


def dense(x, length=None):
    """Values of ``x`` at positions 0..length-1 (default: max support + 2)."""
    top = max((p for p, _ in x.entries), default=-1)
    n = top + 2 if length is None else length
    vals = [0] * n
    for p, v in x.entries:
        vals[p] = v
    return vals


def sparse(vals):
    return tuple((p, v) for p, v in enumerate(vals) if v)


def span_set(blocks, k):
    """Entries tuples of every T^{i_0}x_{n_0}+... with some i_j = 0 and shifts < k."""
    width = max((p for b in blocks for p, _ in b.entries), default=-1) + 1
    dens = [dense(b, width) for b in blocks]
    out = {}
    m = len(blocks)
    for r in range(1, m + 1):
        for idx in itertools.combinations(range(m), r):
            for sh in itertools.product(range(k), repeat=r):
                if 0 not in sh:
                    continue
                acc = [0] * width
                for i, s in zip(idx, sh):
                    for p in range(width):
                        acc[p] += max(dens[i][p] - s, 0)
                out[sparse(acc)] = tuple(zip(idx, sh))
    return out


def span_count(k, m):
    # direct count of shift tuples containing a zero
    total = 0
    for r in range(1, m + 1):
        n_idx = len(list(itertools.combinations(range(m), r)))
        n_sh = sum(1 for sh in itertools.product(range(k), repeat=r) if 0 in sh)
        total += n_idx * n_sh
    return total


def is_sos(x):
    """Definition of a system of staircases, i = 1 boundary clauses skipped."""
    k = x.level
    if k == 0:
        return True
    vals = dense(x)

    def mn(i):
        pos = [p for p, v in enumerate(vals) if v == i]
        return min(pos) if pos else 0

    def mx(i):
        pos = [p for p, v in enumerate(vals) if v == i]
        return max(pos) if pos else 0

    def rng(lo, hi):  # closed interval
        return set(vals[lo:hi + 1]) if hi >= lo else set()

    if set(vals) != set(range(k + 1)):
        return False
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if not mn(i) < mn(j) < mx(i):
                return False
    for i in range(2, k + 1):
        if rng(mn(i - 1), mn(i) - 1) != set(range(i)):
            return False
        if rng(mx(i) + 1, mx(i - 1)) != set(range(i)):
            return False
    return rng(mn(k), mx(k)) == set(range(k + 1))


def atom(kind, k, i, l, x):
    """Dense evaluation of min_i, max_i, theta maps; returns an entries tuple."""
    vals = dense(x)
    where = lambda v: [p for p, u in enumerate(vals) if u == v]  # noqa: E731

    def mn(v):
        return min(where(v)) if where(v) else 0

    def mx(v):
        return max(where(v)) if where(v) else 0

    if kind == "min":
        return ((mn(i), i),)
    if kind == "max":
        return ((mx(i), i),)
    if kind == "theta0":
        lo, hi = mn(i), mn(i + 1)
    elif kind == "theta1":
        lo, hi = mx(i + 1), mx(i)
    else:
        if l == 0:
            return ()
        lo, hi = mn(k), mx(k)
    return tuple((p, l) for p in range(lo + 1, hi) if vals[p] == l)


def block_sequences(span, n):
    """All n-tuples of span elements (entries tuples) in block order."""
    elems = sorted(span)
    out = []

    def rec(prefix, last):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for e in elems:
            if e[0][0] > last:
                rec(prefix + [e], e[-1][0])

    rec([], -1)
    return out
