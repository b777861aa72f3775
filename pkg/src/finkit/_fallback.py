"""Pure-Python implementations of the hot kernels (used when ``_core`` is absent)."""
import numpy as np


def partition_labels(ids, offsets, flat):
    """Refine the trivial partition by each function's atom rows.

    ``ids`` is ``(n_atoms, n_elems)``; function ``f`` uses atom rows
    ``flat[offsets[f]:offsets[f + 1]]``.  Returns ``(n_funcs, n_elems)`` int32
    labels numbered by first occurrence.
    """
    ids = np.asarray(ids, dtype=np.int64)
    n_funcs = len(offsets) - 1
    n = ids.shape[1]
    out = np.zeros((n_funcs, n), dtype=np.int32)
    if n == 0:
        return out
    for f in range(n_funcs):
        lab = np.zeros(n, dtype=np.int64)
        for a in flat[offsets[f]:offsets[f + 1]]:
            row = ids[a]
            combo = lab * (int(row.max()) + 1) + row
            _, lab = np.unique(combo, return_inverse=True)
        _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first)] = np.arange(len(first))
        out[f] = rank[inv.ravel()]
    return out


def span_membership(level, b_off, b_pos, b_val, q_off, q_pos, q_val):
    """Decompose each query vector over the blocks.

    Returns ``(ok, shifts)``: ``ok[q]`` is 1 when query ``q`` lies in the
    span, and ``shifts[q, b]`` is the tetris exponent used on block ``b``
    (-1 when the block is unused).
    """
    nb = len(b_off) - 1
    nq = len(q_off) - 1
    ok = np.zeros(nq, dtype=np.uint8)
    shifts = np.full((nq, nb), -1, dtype=np.int8)
    blocks = [
        list(zip(b_pos[b_off[b]:b_off[b + 1]].tolist(), b_val[b_off[b]:b_off[b + 1]].tolist()))
        for b in range(nb)
    ]
    for q in range(nq):
        pos = q_pos[q_off[q]:q_off[q + 1]].tolist()
        val = q_val[q_off[q]:q_off[q + 1]].tolist()
        n = len(pos)
        if n == 0:
            continue
        b = 0
        j = 0
        good = True
        min_shift = level
        row = shifts[q]
        while j < n:
            p = pos[j]
            while b < nb and blocks[b][-1][0] < p:
                b += 1
            if b == nb or blocks[b][0][0] > p:
                good = False
                break
            hi = blocks[b][-1][0]
            j2 = j
            top = 0
            while j2 < n and pos[j2] <= hi:
                top = max(top, val[j2])
                j2 += 1
            s = level - top
            if s < 0:
                good = False
                break
            piece = [(pp, vv - s) for pp, vv in blocks[b] if vv > s]
            if piece != list(zip(pos[j:j2], val[j:j2])):
                good = False
                break
            row[b] = s
            min_shift = min(min_shift, s)
            j = j2
            b += 1
        if good and min_shift == 0:
            ok[q] = 1
        else:
            row[:] = -1
    return ok, shifts
