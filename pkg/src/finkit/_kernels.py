"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise, or when
``FINKIT_PURE=1`` is set, the pure-Python ``_fallback`` module is used.
"""
import os

import numpy as np

from . import _fallback

BACKEND = "python"
_impl = _fallback
if os.environ.get("FINKIT_PURE", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _core as _impl  # noqa: F811

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback


def partition_labels(ids, offsets, flat):
    return _impl.partition_labels(ids, offsets, flat)


def span_membership(level, b_off, b_pos, b_val, q_off, q_pos, q_val):
    return _impl.span_membership(level, b_off, b_pos, b_val, q_off, q_pos, q_val)


def pack_vectors(vectors):
    """Flatten vectors into ``(offsets, positions, values)`` arrays."""
    off = np.zeros(len(vectors) + 1, dtype=np.int64)
    pos, val = [], []
    for i, v in enumerate(vectors):
        for p, x in v.entries:
            pos.append(p)
            val.append(x)
        off[i + 1] = len(pos)
    return off, np.asarray(pos, dtype=np.int64), np.asarray(val, dtype=np.int32)


class SpanIndex:
    """Batch span-membership queries against one block sequence."""

    def __init__(self, X):
        self.level = X.level
        self.n_blocks = len(X)
        self._packed = pack_vectors(X.blocks)

    def contains(self, vectors):
        """Boolean array: which ``vectors`` lie in the span."""
        if not vectors:
            return np.zeros(0, dtype=bool)
        if self.n_blocks == 0:
            return np.zeros(len(vectors), dtype=bool)
        ok, _ = span_membership(self.level, *self._packed, *pack_vectors(vectors))
        return ok.astype(bool)

    def decompose(self, vectors):
        if self.n_blocks == 0:
            return np.zeros(len(vectors), dtype=np.uint8), np.zeros((len(vectors), 0), np.int8)
        return span_membership(self.level, *self._packed, *pack_vectors(vectors))
