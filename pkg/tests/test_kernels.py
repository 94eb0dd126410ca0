import os
import subprocess
import sys

import numpy as np
import pytest

from homfour import _purekernels
from homfour.cyclotomic import CycRat, cyc_from_int, zeta_pow
from homfour.gf import field_make

try:
    from homfour import _speedups
except ImportError:
    _speedups = None

BACKENDS = [_purekernels] + ([_speedups] if _speedups is not None else [])


def _ids():
    return [b.BACKEND for b in BACKENDS]


def _setup(p, n, m, seed=0):
    ctx = field_make(p, n)
    q = ctx.q
    rng = np.random.default_rng(seed)
    enc = np.arange(q**m, dtype=np.int64)
    chi = rng.integers(1, q, size=m).astype(np.int64)
    return ctx, q, enc, chi


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
@pytest.mark.parametrize("p,n,m", ((2, 1, 2), (3, 1, 3), (2, 2, 2), (3, 2, 2)))
def test_act_all_matches_digitwise_reference(kern, p, n, m):
    ctx, q, enc, chi = _setup(p, n, m)
    got = kern.act_all(enc, chi, ctx.mul_table, q, m)
    for e in enc[:: max(1, len(enc) // 50)]:
        digits = []
        rest = int(e)
        for _ in range(m):
            digits.append(rest % q)
            rest //= q
        digits.reverse()
        moved = [ctx.mul(int(chi[j]), digits[j]) for j in range(m)]
        expect = 0
        for d in moved:
            expect = expect * q + d
        assert got[e] == expect


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
def test_act_all_identity_and_inverse(kern):
    ctx, q, enc, _ = _setup(3, 2, 2)
    one = np.ones(2, dtype=np.int64)
    assert np.array_equal(kern.act_all(enc, one, ctx.mul_table, q, 2), enc)
    chi = np.array([4, 7], dtype=np.int64)
    inv = np.array([ctx.inv(4), ctx.inv(7)], dtype=np.int64)
    moved = kern.act_all(enc, chi, ctx.mul_table, q, 2)
    assert np.array_equal(kern.act_all(moved, inv, ctx.mul_table, q, 2), enc)


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
def test_min_canon_is_orbit_minimum(kern):
    ctx, q, enc, _ = _setup(5, 1, 2)
    units = np.array([[u, u] for u in range(1, q)], dtype=np.int64)
    canon = kern.min_canon(enc, units, ctx.mul_table, q, 2)
    orbits = {}
    for e in enc:
        moved = sorted(int(kern.act_all(enc[e : e + 1], g, ctx.mul_table, q, 2)[0]) for g in units)
        orbits[int(e)] = moved[0]
    assert [orbits[int(e)] for e in enc] == list(canon)
    # canonical representatives are idempotent
    reps = np.unique(canon)
    assert np.array_equal(kern.min_canon(reps, units, ctx.mul_table, q, 2), reps)


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
def test_find_missing(kern):
    hay = np.array([0, 2, 4, 8], dtype=np.int64)
    assert kern.find_missing(hay, np.array([0, 4, 8], dtype=np.int64)) == -1
    assert kern.find_missing(hay, np.array([2, 3, 4], dtype=np.int64)) == 1
    assert kern.find_missing(hay, np.array([9], dtype=np.int64)) == 0
    assert kern.find_missing(hay, np.array([], dtype=np.int64)) == -1


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
def test_equiv_violation_flags_a_twisted_map(kern):
    ctx, q, enc, _ = _setup(3, 1, 1)
    units = np.array([[u] for u in range(1, q)], dtype=np.int64)
    ok = kern.equiv_violation(enc, enc.copy(), units, units, ctx.mul_table, q)
    assert ok == (-1, -1)
    # squaring is not equivariant for the weight-1 action on both sides
    img = np.array([ctx.mul(e, e) for e in range(q)], dtype=np.int64)
    g, x = kern.equiv_violation(enc, img, units, units, ctx.mul_table, q)
    assert (g, x) != (-1, -1)
    moved = kern.act_all(enc, units[g], ctx.mul_table, q, 1)
    lhs = img[np.searchsorted(enc, moved[x])]
    rhs = kern.act_all(img[x : x + 1], units[g], ctx.mul_table, q, 1)[0]
    assert lhs != rhs


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
@pytest.mark.parametrize("p,n,r", ((2, 1, 2), (3, 1, 2), (2, 2, 1), (5, 1, 1)))
def test_pair_trace_matches_object_arithmetic(kern, p, n, r):
    ctx = field_make(p, n)
    q = ctx.q
    enc = np.arange(q**r, dtype=np.int64)
    tr = np.array([ctx.trace(i) for i in range(q)], dtype=np.uint8)
    table = kern.pair_trace(enc, enc, r, q, ctx.mul_table, ctx.add_table, tr)
    for w in range(q**r):
        wd = [(w // q ** (r - 1 - j)) % q for j in range(r)]
        for v in range(q**r):
            vd = [(v // q ** (r - 1 - j)) % q for j in range(r)]
            acc = 0
            for a, b in zip(wd, vd):
                acc = ctx.add(acc, ctx.mul(a, b))
            assert table[w, v] == ctx.trace(acc)


@pytest.mark.parametrize("p", (2, 3, 5))
def test_zeta_mult_matrix_agrees_with_object_multiply(p):
    width = max(1, p - 1)
    rng = np.random.default_rng(3)
    vec = rng.integers(-9, 9, size=width)
    x = CycRat(p, tuple(int(c) for c in vec))
    for a in range(p):
        mat = _purekernels._zeta_mult_matrix(p, a)
        assert CycRat(p, tuple(int(c) for c in mat @ vec)) == x * zeta_pow(p, a)


@pytest.mark.parametrize("kern", BACKENDS, ids=_ids())
@pytest.mark.parametrize("p", (2, 3, 7))
def test_deligne_accum_matches_object_sum(kern, p):
    width = max(1, p - 1)
    rng = np.random.default_rng(11)
    nv, nw = 17, 9
    T = rng.integers(-40, 40, size=(nv, width)).astype(np.int64)
    ptr = rng.integers(0, p, size=(nw, nv)).astype(np.uint8)
    out = kern.deligne_accum(T, ptr, p)
    for w in range(nw):
        acc = cyc_from_int(0, p)
        for v in range(nv):
            acc = acc + CycRat(p, tuple(int(c) for c in T[v])) * zeta_pow(p, int(ptr[w, v]))
        assert CycRat(p, tuple(int(c) for c in out[w])) == acc


@pytest.mark.skipif(_speedups is None, reason="compiled backend not built")
@pytest.mark.parametrize("p,n,m", ((2, 1, 3), (3, 1, 2), (2, 2, 2), (3, 2, 2), (7, 1, 2)))
def test_backends_bit_identical_on_random_workloads(p, n, m):
    ctx, q, enc, _ = _setup(p, n, m, seed=p * 10 + m)
    rng = np.random.default_rng(p + m)
    units = np.array(
        [[u1, u2] + [1] * (m - 2) for u1 in range(1, q) for u2 in range(1, q)],
        dtype=np.int64,
    )[:, :m]
    for g in units[: min(6, len(units))]:
        assert np.array_equal(
            _purekernels.act_all(enc, g, ctx.mul_table, q, m),
            _speedups.act_all(enc, g, ctx.mul_table, q, m),
        )
    assert np.array_equal(
        _purekernels.min_canon(enc, units, ctx.mul_table, q, m),
        _speedups.min_canon(enc, units, ctx.mul_table, q, m),
    )
    img = rng.permutation(enc)
    assert _purekernels.equiv_violation(
        enc, img, units, units, ctx.mul_table, q
    ) == _speedups.equiv_violation(enc, img, units, units, ctx.mul_table, q)
    tr = np.array([ctx.trace(i) for i in range(q)], dtype=np.uint8)
    r = 2
    venc = np.arange(q**r, dtype=np.int64)
    pt_pure = _purekernels.pair_trace(venc, venc, r, q, ctx.mul_table, ctx.add_table, tr)
    pt_fast = _speedups.pair_trace(venc, venc, r, q, ctx.mul_table, ctx.add_table, tr)
    assert np.array_equal(pt_pure, pt_fast)
    T = rng.integers(-(q**2), q**2, size=(q**r, max(1, p - 1))).astype(np.int64)
    assert np.array_equal(
        _purekernels.deligne_accum(T, pt_pure, p),
        _speedups.deligne_accum(T, pt_fast, p),
    )


def test_backend_selector_honors_pure_env():
    code = "from homfour._kernels import BACKEND; print(BACKEND)"
    env = dict(os.environ, HOMFOUR_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"
    env.pop("HOMFOUR_PURE")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    expected = "cython" if _speedups is not None else "numpy"
    assert out.stdout.strip() == expected
