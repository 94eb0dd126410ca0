"""Finite fields F_q, q = p^n, with a deterministic modulus choice.

The modulus is the monic irreducible degree-n polynomial whose coefficient
vector (c_0, ..., c_{n-1}) has minimal base-p integer value c_0 + c_1*p + ...
(leading coefficient excluded).  Irreducibility is certified by trial
division against every monic polynomial of degree <= n/2, which for the
desk-scale degrees used here (n <= 6) is instant and has no failure modes.

Elements are indexed 0..q-1 in base-p order of their coefficient vectors, so
index 0 is 0 and index 1 is 1.  Contexts precompute full add/mul/inv/trace
tables; everything downstream works on indices and stays table-driven.
"""

from __future__ import annotations

import numpy as np

from .cyclotomic import CycRat, is_prime, zeta_pow
from .errors import ConfigError

DEFAULT_FIELD_BOUND = 64


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    # b is monic
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    while da >= db:
        c = a[da] % p
        if c:
            for k in range(db + 1):
                a[da - db + k] = (a[da - db + k] - c * b[k]) % p
        da -= 1
        while da >= 0 and a[da] % p == 0 and da >= db:
            da -= 1
        a = a[: max(da + 1, db)]
        da = len(a) - 1
    return [c % p for c in a]


def _digits(v: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(v % p)
        v //= p
    return out


def _find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Minimal-value monic irreducible of degree n (coefficients c_0..c_{n-1})."""
    divisors = []
    for d in range(1, n // 2 + 1):
        for v in range(p**d):
            divisors.append(_digits(v, p, d) + [1])
    for v in range(p**n):
        cand = _digits(v, p, n) + [1]
        if all(any(_poly_rem(cand, div, p)) for div in divisors):
            return tuple(cand[:n])
    raise AssertionError(f"no irreducible polynomial of degree {n} over F_{p}")


class FieldCtx:
    """The field F_{p^n} with precomputed arithmetic tables."""

    def __init__(self, p: int, n: int, psi_unit: int = 1, bound: int = DEFAULT_FIELD_BOUND):
        if not is_prime(p):
            raise ConfigError(f"p must be prime, got {p}")
        if n < 1:
            raise ConfigError(f"extension degree must be >= 1, got {n}")
        q = p**n
        if q > bound:
            raise ConfigError(f"q = {p}^{n} = {q} exceeds the field bound {bound}")
        if not 1 <= psi_unit < p:
            raise ConfigError(f"psi unit must lie in 1..{p - 1}, got {psi_unit}")
        self.p = p
        self.n = n
        self.q = q
        self.psi_unit = psi_unit
        self.modulus = _find_modulus(p, n)
        self._build_tables()
        self._elems = tuple(FieldElem(self, i) for i in range(q))
        self._psi = tuple(zeta_pow(p, (psi_unit * t) % p) for t in self._tr)
        self._mul_np = None
        self._add_np = None
        self._tr_np = None

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        mod = list(self.modulus) + [1]
        coeffs = [_digits(i, p, n) for i in range(q)]

        def encode(c: list[int]) -> int:
            v = 0
            for x in reversed(c[:n]):
                v = v * p + x
            return v

        self._add = [
            [encode([(a[k] + b[k]) % p for k in range(n)]) for b in coeffs] for a in coeffs
        ]
        mul = []
        for a in coeffs:
            row = []
            for b in coeffs:
                r = _poly_rem(_poly_mul(a, b, p), mod, p)
                row.append(encode(r + [0] * (n - len(r))))
            mul.append(row)
        self._mul = mul
        self._neg = [encode([(-a[k]) % p for k in range(n)]) for a in coeffs]
        inv = [0] * q
        for i in range(1, q):
            inv[i] = mul[i].index(1)
        self._inv = inv
        # Tr(a) = a + a^p + ... + a^(p^(n-1)); the sum lands in the prime field.
        tr = []
        for i in range(q):
            acc, x = 0, i
            for _ in range(n):
                acc = self._add[acc][x]
                x = self.pow(x, p)
            assert acc < p, f"trace of element {i} not in the prime field"
            tr.append(acc)
        self._tr = tr

    # -- index-level arithmetic (engine-facing) -------------------------

    def add(self, i: int, j: int) -> int:
        return self._add[i][j]

    def mul(self, i: int, j: int) -> int:
        return self._mul[i][j]

    def neg(self, i: int) -> int:
        return self._neg[i]

    def inv(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("inverting 0 in a finite field")
        return self._inv[i]

    def pow(self, i: int, e: int) -> int:
        if i == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0 if e else 1
        e %= self.q - 1 if self.q > 2 else 1
        out, base = 1, i
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    def trace(self, i: int) -> int:
        return self._tr[i]

    def elem(self, i: int) -> "FieldElem":
        return self._elems[i]

    def psi_idx(self, i: int) -> CycRat:
        """psi_q at the element with index i, as an exact cyclotomic number."""
        return self._psi[i]

    @property
    def mul_table(self) -> "np.ndarray":
        """q x q uint8 multiplication table (kernel view)."""
        if self._mul_np is None:
            self._mul_np = np.array(self._mul, dtype=np.uint8)
        return self._mul_np

    @property
    def add_table(self) -> "np.ndarray":
        if self._add_np is None:
            self._add_np = np.array(self._add, dtype=np.uint8)
        return self._add_np

    @property
    def tr_table(self) -> "np.ndarray":
        if self._tr_np is None:
            self._tr_np = np.array(self._tr, dtype=np.uint8)
        return self._tr_np

    def coeffs(self, i: int) -> tuple[int, ...]:
        return tuple(_digits(i, self.p, self.n))

    def index_of(self, coeffs) -> int:
        v = 0
        for x in reversed(list(coeffs)):
            v = v * self.p + x % self.p
        return v

    def __repr__(self):
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={self.modulus})"


class FieldElem:
    """An element of F_q; canonical datum is the coefficient vector."""

    __slots__ = ("ctx", "idx")

    def __init__(self, ctx: FieldCtx, idx: int):
        self.ctx = ctx
        self.idx = idx

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.idx)

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.elem(self.ctx.add(self.idx, other.idx))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.elem(self.ctx.add(self.idx, self.ctx.neg(other.idx)))

    def __neg__(self) -> "FieldElem":
        return self.ctx.elem(self.ctx.neg(self.idx))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.elem(self.ctx.mul(self.idx, other.idx))

    def __pow__(self, e: int) -> "FieldElem":
        return self.ctx.elem(self.ctx.pow(self.idx, e))

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        c1, c2 = self.ctx, other.ctx
        return (c1.p, c1.n, c1.modulus, self.idx) == (c2.p, c2.n, c2.modulus, other.idx)

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.n, self.idx))

    def __repr__(self):
        return f"FieldElem({self.ctx.p}^{self.ctx.n}, {self.idx})"

    def __str__(self):
        c = self.coeffs
        terms = []
        for i, v in enumerate(c):
            if v == 0:
                continue
            if i == 0:
                terms.append(str(v))
            else:
                xi = "x" if i == 1 else f"x^{i}"
                terms.append(xi if v == 1 else f"{v}{xi}")
        return " + ".join(reversed(terms)) if terms else "0"


_CTX_CACHE: dict[tuple[int, int, int], FieldCtx] = {}


def field_make(p: int, n: int, psi_unit: int = 1, bound: int = DEFAULT_FIELD_BOUND) -> FieldCtx:
    """Deterministic context for F_{p^n} (cached per (p, n, psi_unit))."""
    key = (p, n, psi_unit)
    ctx = _CTX_CACHE.get(key)
    if ctx is None or ctx.q > bound:
        ctx = FieldCtx(p, n, psi_unit=psi_unit, bound=bound)
        _CTX_CACHE[key] = ctx
    return ctx


def elements(ctx: FieldCtx) -> tuple[FieldElem, ...]:
    """All q elements in base-p integer order of coefficient vectors."""
    return ctx._elems


def fe_add(ctx: FieldCtx, a: FieldElem, b: FieldElem) -> FieldElem:
    return ctx.elem(ctx.add(a.idx, b.idx))


def fe_mul(ctx: FieldCtx, a: FieldElem, b: FieldElem) -> FieldElem:
    return ctx.elem(ctx.mul(a.idx, b.idx))


def fe_inv(ctx: FieldCtx, a: FieldElem) -> FieldElem:
    return ctx.elem(ctx.inv(a.idx))


def trace_to_prime(ctx: FieldCtx, a: FieldElem) -> int:
    """Tr(a) = sum of a^(p^i) for i < n, as a residue mod p."""
    return ctx.trace(a.idx)


def psi_q(ctx: FieldCtx, a: FieldElem) -> CycRat:
    """The additive character zeta_p^(unit * Tr(a)); nontrivial since Tr is onto."""
    return ctx._psi[a.idx]
