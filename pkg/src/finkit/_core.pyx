# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as ``_fallback``."""
import numpy as np
cimport numpy as cnp


def partition_labels(ids, offsets, flat):
    cdef int[:, :] idv = np.ascontiguousarray(ids, dtype=np.int32)
    cdef long long[:] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef int[:] fl = np.ascontiguousarray(flat, dtype=np.int32)
    cdef Py_ssize_t n_atoms = idv.shape[0]
    cdef Py_ssize_t n = idv.shape[1]
    cdef Py_ssize_t n_funcs = off.shape[0] - 1
    out = np.zeros((n_funcs, n), dtype=np.int32)
    cdef int[:, :] ov = out
    if n == 0 or n_funcs == 0:
        return out
    cdef int width = 1
    cdef Py_ssize_t a, e, f, t
    for a in range(n_atoms):
        for e in range(n):
            if idv[a, e] + 1 > width:
                width = idv[a, e] + 1
    stamp_arr = np.zeros(n * width, dtype=np.int32)
    value_arr = np.zeros(n * width, dtype=np.int32)
    cur_arr = np.zeros(n, dtype=np.int32)
    cdef int[:] stamp = stamp_arr
    cdef int[:] value = value_arr
    cdef int[:] cur = cur_arr
    cdef int tick = 0
    cdef int fresh, row
    cdef long long key
    for f in range(n_funcs):
        for e in range(n):
            cur[e] = 0
        for t in range(off[f], off[f + 1]):
            row = fl[t]
            tick += 1
            fresh = 0
            for e in range(n):
                key = <long long>cur[e] * width + idv[row, e]
                if stamp[key] != tick:
                    stamp[key] = tick
                    value[key] = fresh
                    fresh += 1
                cur[e] = value[key]
        for e in range(n):
            ov[f, e] = cur[e]
    return out


def span_membership(int level, b_off, b_pos, b_val, q_off, q_pos, q_val):
    cdef long long[:] bo = np.ascontiguousarray(b_off, dtype=np.int64)
    cdef long long[:] bp = np.ascontiguousarray(b_pos, dtype=np.int64)
    cdef int[:] bv = np.ascontiguousarray(b_val, dtype=np.int32)
    cdef long long[:] qo = np.ascontiguousarray(q_off, dtype=np.int64)
    cdef long long[:] qp = np.ascontiguousarray(q_pos, dtype=np.int64)
    cdef int[:] qv = np.ascontiguousarray(q_val, dtype=np.int32)
    cdef Py_ssize_t nb = bo.shape[0] - 1
    cdef Py_ssize_t nq = qo.shape[0] - 1
    ok_arr = np.zeros(nq, dtype=np.uint8)
    shifts_arr = np.full((nq, nb), -1, dtype=np.int8)
    cdef unsigned char[:] ok = ok_arr
    cdef signed char[:, :] sh = shifts_arr
    cdef Py_ssize_t q, b, j, j2, end, u
    cdef long long p, hi
    cdef int top, s, min_shift
    cdef bint good
    for q in range(nq):
        j = qo[q]
        end = qo[q + 1]
        if j == end:
            continue
        b = 0
        good = True
        min_shift = level
        while j < end:
            p = qp[j]
            while b < nb and bp[bo[b + 1] - 1] < p:
                b += 1
            if b == nb or bp[bo[b]] > p:
                good = False
                break
            hi = bp[bo[b + 1] - 1]
            j2 = j
            top = 0
            while j2 < end and qp[j2] <= hi:
                if qv[j2] > top:
                    top = qv[j2]
                j2 += 1
            s = level - top
            if s < 0:
                good = False
                break
            # compare the piece with T^s of the block
            u = j
            for t in range(bo[b], bo[b + 1]):
                if bv[t] > s:
                    if u >= j2 or qp[u] != bp[t] or qv[u] != bv[t] - s:
                        good = False
                        break
                    u += 1
            if not good or u != j2:
                good = False
                break
            sh[q, b] = s
            if s < min_shift:
                min_shift = s
            j = j2
            b += 1
        if good and min_shift == 0:
            ok[q] = 1
        else:
            for b in range(nb):
                sh[q, b] = -1
    return ok_arr, shifts_arr
