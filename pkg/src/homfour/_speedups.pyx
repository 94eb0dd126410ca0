# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot point-level kernels.

Mirrors homfour._purekernels exactly; see that module for the encoding
conventions.  Both backends must return bit-identical arrays.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef inline cnp.int64_t _act_one(cnp.int64_t e, const cnp.int64_t* chi,
                                 const cnp.uint8_t[:, ::1] mul,
                                 cnp.int64_t q, int m, cnp.int64_t top) nogil:
    cdef cnp.int64_t out = 0, shift = top, dig
    cdef int j
    for j in range(m):
        dig = e / shift
        e -= dig * shift
        out = out * q + mul[chi[j], dig]
        shift /= q
    return out


def act_all(cnp.int64_t[::1] enc, cnp.int64_t[::1] chi,
            const cnp.uint8_t[:, ::1] mul, int q, int m):
    cdef Py_ssize_t n = enc.shape[0], i
    cdef cnp.int64_t top = 1
    cdef int j
    for j in range(m - 1):
        top *= q
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef const cnp.int64_t* chip = &chi[0] if m else NULL
    for i in range(n):
        out[i] = _act_one(enc[i], chip, mul, q, m, top)
    return out_arr


def min_canon(cnp.int64_t[::1] enc, cnp.int64_t[:, ::1] chis,
              const cnp.uint8_t[:, ::1] mul, int q, int m):
    cdef Py_ssize_t n = enc.shape[0], G = chis.shape[0], i, g
    cdef cnp.int64_t top = 1, moved
    cdef int j
    for j in range(m - 1):
        top *= q
    best_arr = np.array(enc, dtype=np.int64, copy=True)
    cdef cnp.int64_t[::1] best = best_arr
    for g in range(G):
        for i in range(n):
            moved = _act_one(enc[i], &chis[g, 0] if m else NULL, mul, q, m, top)
            if moved < best[i]:
                best[i] = moved
    return best_arr


cdef inline Py_ssize_t _bisect(const cnp.int64_t[::1] arr, cnp.int64_t key) nogil:
    cdef Py_ssize_t lo = 0, hi = arr.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


def find_missing(cnp.int64_t[::1] enc_sorted, cnp.int64_t[::1] cand):
    cdef Py_ssize_t i, pos, n = cand.shape[0], ns = enc_sorted.shape[0]
    for i in range(n):
        pos = _bisect(enc_sorted, cand[i])
        if pos >= ns or enc_sorted[pos] != cand[i]:
            return i
    return -1


def equiv_violation(cnp.int64_t[::1] enc_src, cnp.int64_t[::1] img_enc,
                    cnp.int64_t[:, ::1] chis_src, cnp.int64_t[:, ::1] chis_tgt,
                    const cnp.uint8_t[:, ::1] mul, int q):
    cdef int m_src = chis_src.shape[1], m_tgt = chis_tgt.shape[1]
    cdef Py_ssize_t G = chis_src.shape[0], n = enc_src.shape[0], g, i, pos
    cdef cnp.int64_t top_s = 1, top_t = 1, moved, rhs
    cdef int j
    for j in range(m_src - 1):
        top_s *= q
    for j in range(m_tgt - 1):
        top_t *= q
    for g in range(G):
        for i in range(n):
            moved = _act_one(enc_src[i], &chis_src[g, 0] if m_src else NULL,
                             mul, q, m_src, top_s)
            pos = _bisect(enc_src, moved)
            rhs = _act_one(img_enc[i], &chis_tgt[g, 0] if m_tgt else NULL,
                           mul, q, m_tgt, top_t)
            if img_enc[pos] != rhs:
                return g, i
    return -1, -1


def pair_trace(cnp.int64_t[::1] enc_w, cnp.int64_t[::1] enc_v, int r, int q,
               const cnp.uint8_t[:, ::1] mul, const cnp.uint8_t[:, ::1] add,
               const cnp.uint8_t[::1] tr):
    cdef Py_ssize_t nw = enc_w.shape[0], nv = enc_v.shape[0], wi, vi
    cdef int k
    cdef cnp.int64_t rest, shift, top = 1
    for k in range(r - 1):
        top *= q
    wd_arr = np.empty((nw, r), dtype=np.uint8)
    vd_arr = np.empty((nv, r), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] wd = wd_arr
    cdef cnp.uint8_t[:, ::1] vd = vd_arr
    for wi in range(nw):
        rest = enc_w[wi]
        shift = top
        for k in range(r):
            wd[wi, k] = <cnp.uint8_t> (rest / shift)
            rest -= (rest / shift) * shift
            shift /= q
    for vi in range(nv):
        rest = enc_v[vi]
        shift = top
        for k in range(r):
            vd[vi, k] = <cnp.uint8_t> (rest / shift)
            rest -= (rest / shift) * shift
            shift /= q
    out_arr = np.empty((nw, nv), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef cnp.uint8_t acc
    with nogil:
        for wi in range(nw):
            for vi in range(nv):
                acc = 0
                for k in range(r):
                    acc = add[acc, mul[wd[wi, k], vd[vi, k]]]
                out[wi, vi] = tr[acc]
    return out_arr


def deligne_accum(cnp.int64_t[:, ::1] T, const cnp.uint8_t[:, ::1] ptr, int p):
    cdef Py_ssize_t nw = ptr.shape[0], nv = ptr.shape[1], wi, vi
    cdef int width = T.shape[1], i, j, e, a
    out_arr = np.zeros((nw, width), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef cnp.int64_t c
    with nogil:
        for wi in range(nw):
            for vi in range(nv):
                a = ptr[wi, vi]
                if p == 2:
                    if a == 0:
                        out[wi, 0] += T[vi, 0]
                    else:
                        out[wi, 0] -= T[vi, 0]
                    continue
                for i in range(width):
                    c = T[vi, i]
                    if c == 0:
                        continue
                    e = (i + a) % p
                    if e == p - 1:
                        for j in range(width):
                            out[wi, j] -= c
                    else:
                        out[wi, e] += c
    return out_arr
