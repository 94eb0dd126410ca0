"""Exact arithmetic in Q(zeta_p) for prime p.

Elements are stored as integer coefficient vectors over the power basis
zeta^0, ..., zeta^(p-2) with a positive integer denominator.  The vanishing
sum 1 + zeta + ... + zeta^(p-1) = 0 is used to rewrite zeta^(p-1), so the
representation is canonical: equal values have equal (num, den) data.  For
p = 2 the basis is {1} and zeta = -1, i.e. values are plain rationals.

All character values and trace functions in this package live here; there is
no floating-point compute path (cyc_to_complex is diagnostic only).
"""

from __future__ import annotations

import cmath
from math import gcd


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _width(p: int) -> int:
    return max(1, p - 1)


class CycRat:
    """An exact element of Q(zeta_p), kept in reduced canonical form."""

    __slots__ = ("p", "num", "den")

    def __init__(self, p: int, num, den: int = 1):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        num = tuple(int(c) for c in num)
        if len(num) != _width(p):
            raise ValueError(f"need {_width(p)} coefficients for p={p}, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if den < 0:
            den = -den
            num = tuple(-c for c in num)
        if den != 1:
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                num = tuple(c // g for c in num)
                den //= g
        if den != 1 and not any(num):
            den = 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycRat is immutable")

    # -- helpers -------------------------------------------------------

    def _coerce(self, other) -> "CycRat":
        if isinstance(other, CycRat):
            if other.p != self.p:
                raise ValueError(f"mixed roots of unity: p={self.p} vs p={other.p}")
            return other
        if isinstance(other, int):
            return cyc_from_int(other, self.p)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integer(self) -> bool:
        return self.den == 1 and not any(self.num[1:])

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == 1 and other.den == 1:
            return CycRat(self.p, tuple(a + b for a, b in zip(self.num, other.num)), 1)
        d1, d2 = self.den, other.den
        g = gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        num = tuple(a * m1 + b * m2 for a, b in zip(self.num, other.num))
        return CycRat(self.p, num, d1 * m1)

    __radd__ = __add__

    def __neg__(self):
        return CycRat(self.p, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        a, b = self.num, other.num
        if p == 2:
            num = (a[0] * b[0],)
        else:
            w = p - 1
            out = [0] * w
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    if bj == 0:
                        continue
                    c = ai * bj
                    e = i + j
                    if e >= p:
                        e -= p
                    if e == w:
                        for k in range(w):
                            out[k] -= c
                    else:
                        out[e] += c
            num = tuple(out)
        return CycRat(p, num, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = cyc_from_int(1, self.p)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = cyc_from_int(other, self.p)
        if not isinstance(other, CycRat):
            return NotImplemented
        return self.p == other.p and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycRat({self.p}, {self.num}, {self.den})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.num):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*z" if abs(c) != 1 else ("z" if c > 0 else "-z"))
            else:
                terms.append(f"{c}*z^{i}" if abs(c) != 1 else (f"z^{i}" if c > 0 else f"-z^{i}"))
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        if self.den == 1:
            return body
        return f"({body})/{self.den}"


# -- constructors and spec-level operations ----------------------------


def cyc_from_int(k: int, p: int) -> CycRat:
    """The rational integer k as an element of Q(zeta_p)."""
    num = [0] * _width(p)
    num[0] = int(k)
    return CycRat(p, num, 1)


def zeta_pow(p: int, a: int) -> CycRat:
    """zeta_p^a in the reduced basis; zeta_pow(p, 0) = 1."""
    if not 0 <= a < p:
        raise ValueError(f"exponent {a} out of range for p={p}")
    if p == 2:
        return CycRat(2, (1 if a == 0 else -1,), 1)
    w = p - 1
    if a < w:
        num = [0] * w
        num[a] = 1
    else:
        num = [-1] * w
    return CycRat(p, num, 1)


def cyc_add(a: CycRat, b: CycRat) -> CycRat:
    return a + b


def cyc_mul(a: CycRat, b: CycRat) -> CycRat:
    return a * b


def cyc_neg(a: CycRat) -> CycRat:
    return -a


def cyc_div_int(a: CycRat, k: int) -> CycRat:
    """Exact division by a nonzero integer."""
    if k == 0:
        raise ZeroDivisionError("division by zero integer")
    return CycRat(a.p, a.num, a.den * k)


def cyc_scale_q_pow(a: CycRat, q: int, m: int) -> CycRat:
    """a * q^(-m): the effect of a Tate twist (m) on a trace value."""
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if m >= 0:
        return CycRat(a.p, a.num, a.den * q**m)
    s = q ** (-m)
    return CycRat(a.p, tuple(c * s for c in a.num), a.den)


def cyc_to_complex(a: CycRat) -> complex:
    """Floating evaluation at zeta_p = exp(2*pi*i/p).  Diagnostic only."""
    z = cmath.exp(2j * cmath.pi / a.p)
    acc = 0j
    for i in reversed(range(len(a.num))):
        acc = acc * z + a.num[i]
    return acc / a.den


# -- JSON wire format ---------------------------------------------------


def cyc_to_json(a: CycRat) -> dict:
    return {"p": a.p, "num": list(a.num), "den": a.den}


def cyc_from_json(obj: dict) -> CycRat:
    if not isinstance(obj, dict) or not {"p", "num", "den"} <= set(obj):
        raise ValueError(f"not a cyclotomic value record: {obj!r}")
    return CycRat(int(obj["p"]), obj["num"], int(obj["den"]))
