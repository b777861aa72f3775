"""Hypothesis strategies for vectors, block sequences and sos vectors."""
from hypothesis import strategies as st

from finkit.finvec import BlockSequence, KVector
from finkit.staircase import make_sos


@st.composite
def kvectors(draw, k=None, max_len=6, origin=0):
    k = draw(st.integers(1, 3)) if k is None else k
    n = draw(st.integers(1, max_len))
    gaps = draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))
    vals = draw(st.lists(st.integers(1, k), min_size=n, max_size=n))
    vals[draw(st.integers(0, n - 1))] = k
    pos, p = [], origin - 1
    for g in gaps:
        p += g
        pos.append(p)
    return KVector(k, tuple(zip(pos, vals)))


@st.composite
def block_sequences(draw, k=None, min_blocks=1, max_blocks=4, max_len=3):
    k = draw(st.integers(1, 3)) if k is None else k
    m = draw(st.integers(min_blocks, max_blocks))
    blocks, origin = [], draw(st.integers(0, 3))
    for _ in range(m):
        b = draw(kvectors(k, max_len, origin))
        blocks.append(b)
        origin = b.max_support + 1 + draw(st.integers(0, 2))
    return BlockSequence(k, tuple(blocks))


@st.composite
def sos_vectors(draw, k=None):
    """Unshifted sums of make_sos blocks, stretched by inserting zero runs."""
    k = draw(st.integers(1, 4)) if k is None else k
    strong = draw(st.booleans())
    X = make_sos(k, 3, strong=strong, origin=draw(st.integers(0, 5)))
    chosen = draw(st.lists(st.sampled_from(range(3)), min_size=1, max_size=3, unique=True))
    entries = sorted(e for i in chosen for e in X[i].entries)
    out, shift = [], 0
    for p, v in entries:
        shift += draw(st.integers(0, 1))
        out.append((p + shift, v))
    return KVector(k, tuple(out))
