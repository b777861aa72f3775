import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from finkit import _fallback, _kernels
from finkit._kernels import pack_vectors
from finkit.finvec import span_enumerate
from finkit.staircase import make_sos

try:
    from finkit import _core
except ImportError:  # pragma: no cover - only without a compiler
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")


def _labels_oracle(ids, offsets, flat):
    out = []
    for f in range(len(offsets) - 1):
        rows = flat[offsets[f]:offsets[f + 1]]
        keys = [tuple(int(ids[r, e]) for r in rows) for e in range(ids.shape[1])]
        first = {}
        out.append([first.setdefault(key, len(first)) for key in keys])
    return np.asarray(out, dtype=np.int32).reshape(len(offsets) - 1, ids.shape[1])


@st.composite
def label_inputs(draw):
    n_atoms = draw(st.integers(1, 5))
    n = draw(st.integers(1, 12))
    ids = np.asarray(
        draw(st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n_atoms, max_size=n_atoms)),
        dtype=np.int32,
    )
    funcs = draw(st.lists(st.lists(st.integers(0, n_atoms - 1), max_size=4), min_size=1, max_size=6))
    flat, offsets = [], [0]
    for f in funcs:
        flat += f
        offsets.append(len(flat))
    return ids, np.asarray(offsets, dtype=np.int64), np.asarray(flat, dtype=np.int32)


@given(label_inputs())
def test_fallback_partition_labels(args):
    assert np.array_equal(_fallback.partition_labels(*args), _labels_oracle(*args))


@needs_core
@given(label_inputs())
def test_compiled_partition_labels(args):
    assert np.array_equal(_core.partition_labels(*args), _labels_oracle(*args))


@needs_core
@pytest.mark.parametrize("k", [1, 2, 3])
def test_membership_backends_agree(k):
    X = make_sos(k, 3)
    Y = make_sos(k, 4)
    queries = [w for w, _ in span_enumerate(Y)]
    args = (k, *pack_vectors(X.blocks), *pack_vectors(queries))
    a_ok, a_sh = _fallback.span_membership(*args)
    b_ok, b_sh = _core.span_membership(*args)
    assert np.array_equal(a_ok, b_ok)
    assert np.array_equal(a_sh, b_sh)
    # the first three blocks of Y are X, so exactly the X-only terms are members
    assert a_ok.sum() == len(span_enumerate(X))


def test_backend_constant():
    assert _kernels.BACKEND in ("compiled", "python")
    forced = os.environ.get("FINKIT_PURE", "").lower() in ("1", "true", "yes")
    if _core is not None and not forced:
        assert _kernels.BACKEND == "compiled"


def test_pure_env_forces_fallback():
    env = dict(os.environ, FINKIT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import finkit._kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_empty_inputs():
    ids = np.zeros((2, 0), dtype=np.int32)
    off = np.asarray([0, 1], dtype=np.int64)
    flat = np.asarray([0], dtype=np.int32)
    assert _kernels.partition_labels(ids, off, flat).shape == (1, 0)
    assert _fallback.partition_labels(ids, off, flat).shape == (1, 0)
