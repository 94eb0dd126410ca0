"""Fallback implementations of the hot point-level kernels (numpy, no C extension).

Points of an m-coordinate space are encoded as base-q integers with coordinate 0
as the most significant digit, so ascending encoded order is lexicographic order.
All tables are small (q <= 64) uint8 lookup tables from the field context.

The compiled twin of this module is homfour._speedups; homfour._kernels picks
one at import time.  Both must return bit-identical results.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def act_all(enc: np.ndarray, chi: np.ndarray, mul: np.ndarray, q: int, m: int) -> np.ndarray:
    """Apply the torus element with per-coordinate scalars chi to every encoded point."""
    out = np.zeros(len(enc), dtype=np.int64)
    shift = q ** (m - 1) if m else 1
    rest = enc
    for j in range(m):
        dig = (rest // shift).astype(np.intp)
        rest = rest - dig * shift
        out = out * q + mul[chi[j], dig]
        shift //= q
    return out


def min_canon(enc: np.ndarray, chis: np.ndarray, mul: np.ndarray, q: int, m: int) -> np.ndarray:
    """Per point, the minimum encoding over its orbit (canonical representative)."""
    best = enc.copy()
    for g in range(chis.shape[0]):
        np.minimum(best, act_all(enc, chis[g], mul, q, m), out=best)
    return best


def find_missing(enc_sorted: np.ndarray, cand: np.ndarray) -> int:
    """Index of the first candidate not present in the sorted array, or -1."""
    pos = np.searchsorted(enc_sorted, cand)
    bad = (pos >= len(enc_sorted)) | (enc_sorted[np.minimum(pos, len(enc_sorted) - 1)] != cand)
    idx = np.flatnonzero(bad)
    return int(idx[0]) if len(idx) else -1


def equiv_violation(
    enc_src: np.ndarray,
    img_enc: np.ndarray,
    chis_src: np.ndarray,
    chis_tgt: np.ndarray,
    mul: np.ndarray,
    q: int,
) -> tuple[int, int]:
    """First (g index, point index) with f(g.x) != gpmap(g).f(x), or (-1, -1).

    img_enc[i] is the encoded image of source point i; enc_src must be sorted.
    """
    m_src = chis_src.shape[1]
    m_tgt = chis_tgt.shape[1]
    for g in range(chis_src.shape[0]):
        moved = act_all(enc_src, chis_src[g], mul, q, m_src)
        pos = np.searchsorted(enc_src, moved)
        lhs = img_enc[pos]
        rhs = act_all(img_enc, chis_tgt[g], mul, q, m_tgt)
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            return g, int(bad[0])
    return -1, -1


def pair_trace(
    enc_w: np.ndarray,
    enc_v: np.ndarray,
    r: int,
    q: int,
    mul: np.ndarray,
    add: np.ndarray,
    tr: np.ndarray,
) -> np.ndarray:
    """Matrix of Tr(<w, v>) in [0, p) over all pairs of encoded r-vectors."""
    wd = np.empty((len(enc_w), r), dtype=np.intp)
    vd = np.empty((len(enc_v), r), dtype=np.intp)
    for arr, out in ((enc_w, wd), (enc_v, vd)):
        rest = arr
        shift = q ** (r - 1)
        for j in range(r):
            out[:, j] = rest // shift
            rest = rest - out[:, j] * shift
            shift //= q
    acc = np.zeros((len(enc_w), len(enc_v)), dtype=np.uint8)
    for k in range(r):
        prod = mul[wd[:, k][:, None], vd[None, :, k]]
        acc = add[acc.astype(np.intp), prod.astype(np.intp)]
    return tr[acc.astype(np.intp)]


def _zeta_mult_matrix(p: int, a: int) -> np.ndarray:
    """Integer matrix of multiplication by zeta^a on the reduced basis."""
    w = max(1, p - 1)
    if p == 2:
        return np.array([[1 if a == 0 else -1]], dtype=np.int64)
    out = np.zeros((w, w), dtype=np.int64)
    for i in range(w):
        e = (i + a) % p
        if e == w:
            out[:, i] -= 1
        else:
            out[e, i] += 1
    return out


def deligne_accum(T: np.ndarray, ptr: np.ndarray, p: int) -> np.ndarray:
    """out[w] = sum over v of zeta^ptr[w, v] * T[v], rows as basis coefficient vectors."""
    width = T.shape[1]
    out = np.zeros((ptr.shape[0], width), dtype=np.int64)
    for a in range(p):
        mask = (ptr == a).astype(np.int64)
        if not mask.any():
            continue
        out += mask @ T @ _zeta_mult_matrix(p, a).T
    return out
