"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--k 4] [--repeat 3]

Workloads: the partition refinement behind staircase-relation dedupe, and a
batch of span-membership queries against a sos base.
"""
import argparse
import random
import time

import numpy as np

from finkit import _fallback
from finkit._kernels import pack_vectors
from finkit.finvec import KVector, span_enumerate
from finkit.staircase import (
    all_atoms,
    atom_table,
    make_sos,
    raw_stair_functions,
    reference_span,
)

try:
    from finkit import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def dedupe_inputs(k):
    funcs = raw_stair_functions(k)
    atoms = all_atoms(k)
    index = {a: i for i, a in enumerate(atoms)}
    ids = atom_table(atoms, reference_span(k))
    flat, offsets = [], [0]
    for f in funcs:
        flat.extend(index[a] for a in f.atoms)
        offsets.append(len(flat))
    return ids, np.asarray(offsets, dtype=np.int64), np.asarray(flat, dtype=np.int32)


def membership_inputs(k, blocks, extra, seed=0):
    X = make_sos(k, blocks)
    rng = random.Random(seed)
    queries = [w for w, _ in span_enumerate(X)]
    for w in list(queries[:extra]):
        e = list(w.entries)
        i = rng.randrange(len(e))
        p, v = e[i]
        if v > 1:
            e[i] = (p, v - 1)
        try:
            queries.append(KVector(k, tuple(e)))
        except ValueError:
            pass
    return (k, *pack_vectors(X.blocks), *pack_vectors(queries)), len(queries)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--blocks", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    ids, off, flat = dedupe_inputs(args.k)
    mem_args, nq = membership_inputs(min(args.k, 3), args.blocks, 2000)
    rows = []
    backends = [("python", _fallback)] + ([("compiled", _core)] if _core else [])
    results = {}
    for name, mod in backends:
        t1, lab = best_of(lambda: mod.partition_labels(ids, off, flat), args.repeat)
        t2, mem = best_of(lambda: mod.span_membership(*mem_args), args.repeat)
        results[name] = (lab, mem)
        rows.append((name, t1, t2))
    print(f"partition_labels: {off.size - 1} functions x {ids.shape[1]} elements (k={args.k})")
    print(f"span_membership:  {nq} queries against {args.blocks} sos blocks")
    print(f"{'backend':10s} {'partition (s)':>14s} {'membership (s)':>15s}")
    for name, t1, t2 in rows:
        print(f"{name:10s} {t1:14.4f} {t2:15.4f}")
    if len(rows) == 2:
        (_, p1, m1), (_, p2, m2) = rows
        print(f"{'speedup':10s} {p1 / p2:13.1f}x {m1 / m2:14.1f}x")
        a, b = results["python"], results["compiled"]
        same = np.array_equal(a[0], b[0]) and all(np.array_equal(x, y) for x, y in zip(a[1], b[1]))
        print("outputs identical:", same)


if __name__ == "__main__":
    main()
