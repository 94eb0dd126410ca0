"""Trace functions on orbit sets and the function-level six-operation calculus.

A TraceFunction assigns an exact cyclotomic number to every isomorphism class
of a quotient groupoid (scheme-level functions are the k=0 case, one class
per point).  The four operations with a pointwise shadow are implemented
exactly: pullback is precomposition, tensor is the pointwise product, shift
scales by (-1)^n, Tate twist by q^(-m).

pushforward_shriek uses one rule for schemes and quotient stacks alike:

    out(ybar) = (q-1)^(-k_src) * sum over pairs (x, g) with f(x) = g.y of t(xbar)

collapsed to class level as out[j] = stab_j / (q-1)^k_src * sum of size_i*t[i]
over source classes mapping to j.  For k=0 this is the plain fiber sum; for
quotients it carries the automorphism weights of groupoid point counts.  The
verify module pins this rule against every closed-form identity in scope.
"""

from __future__ import annotations

import json
from typing import Sequence

from homfour.cyclotomic import CycRat, cyc_div_int, cyc_from_json, cyc_from_int, cyc_scale_q_pow, cyc_to_json
from homfour.errors import ConfigError
from homfour.gf import FieldCtx, field_make
from homfour.gspace import EquivariantMap, GSpace, OrbitSet, build_A1, build_PV, build_V, build_V_dual


class TraceFunction:
    """Exact function on the classes of an OrbitSet."""

    __slots__ = ("orbits", "values")

    def __init__(self, orbits: OrbitSet, values: Sequence[CycRat]):
        values = tuple(values)
        if len(values) != orbits.num_classes:
            raise ValueError(
                f"{len(values)} values for {orbits.num_classes} classes of {orbits.space.name}"
            )
        p = orbits.ctx.p
        for v in values:
            if not isinstance(v, CycRat):
                raise TypeError(f"values must be CycRat, got {type(v).__name__}")
            if v.p != p:
                raise ValueError(f"value over Q(zeta_{v.p}) on a characteristic-{p} space")
        object.__setattr__(self, "orbits", orbits)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("TraceFunction is immutable")

    def same_space(self, other: "TraceFunction") -> bool:
        return self.orbits.space.same_space(other.orbits.space)

    def __eq__(self, other):
        if not isinstance(other, TraceFunction):
            return NotImplemented
        return self.same_space(other) and self.values == other.values

    def __hash__(self):
        return hash((id(self.orbits), self.values))

    def __add__(self, other: "TraceFunction") -> "TraceFunction":
        _require_same(self, other)
        return TraceFunction(self.orbits, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "TraceFunction") -> "TraceFunction":
        _require_same(self, other)
        return TraceFunction(self.orbits, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: CycRat | int) -> "TraceFunction":
        return TraceFunction(self.orbits, tuple(v * c for v in self.values))

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.values)
        return f"TraceFunction({self.orbits.space.name}: [{vals}])"


def _require_same(a: TraceFunction, b: TraceFunction) -> None:
    if not a.same_space(b):
        raise ValueError(
            f"functions live on different spaces: {a.orbits.space.name} vs {b.orbits.space.name}"
        )


def constant(orbits: OrbitSet, value: CycRat | int) -> TraceFunction:
    if isinstance(value, int):
        value = cyc_from_int(value, orbits.ctx.p)
    return TraceFunction(orbits, (value,) * orbits.num_classes)


def delta(orbits: OrbitSet, class_idx: int) -> TraceFunction:
    p = orbits.ctx.p
    one, zero = cyc_from_int(1, p), cyc_from_int(0, p)
    return TraceFunction(
        orbits, tuple(one if i == class_idx else zero for i in range(orbits.num_classes))
    )


def pullback(f: EquivariantMap, t: TraceFunction) -> TraceFunction:
    """Precomposition: value at a source class = value at its image class."""
    if not t.orbits.space.same_space(f.target):
        raise ValueError(f"function on {t.orbits.space.name} pulled along {f.name}")
    src_orbits = f.source.orbits()
    img = f.class_image(src_orbits, t.orbits)
    return TraceFunction(src_orbits, tuple(t.values[int(j)] for j in img))


def pushforward_shriek(f: EquivariantMap, t: TraceFunction) -> TraceFunction:
    """The weighted fiber sum described in the module docstring."""
    if not t.orbits.space.same_space(f.source):
        raise ValueError(f"function on {t.orbits.space.name} pushed along {f.name}")
    tgt_orbits = f.target.orbits()
    img = f.class_image(t.orbits, tgt_orbits)
    p = t.orbits.ctx.p
    zero = cyc_from_int(0, p)
    acc = [zero] * tgt_orbits.num_classes
    sizes = t.orbits.sizes
    for i, j in enumerate(img):
        v = t.values[i]
        if not v.is_zero():
            acc[int(j)] = acc[int(j)] + v * int(sizes[i])
    denom = f.source.group_order
    out = [
        cyc_div_int(acc[j] * int(tgt_orbits.stabs[j]), denom)
        for j in range(tgt_orbits.num_classes)
    ]
    return TraceFunction(tgt_orbits, out)


def tensor(a: TraceFunction, b: TraceFunction) -> TraceFunction:
    _require_same(a, b)
    return TraceFunction(a.orbits, tuple(x * y for x, y in zip(a.values, b.values)))


def shift(t: TraceFunction, nsteps: int) -> TraceFunction:
    if nsteps % 2 == 0:
        return t
    return t.scale(-1)


def tate_twist(t: TraceFunction, m: int) -> TraceFunction:
    q = t.orbits.ctx.q
    return TraceFunction(t.orbits, tuple(cyc_scale_q_pow(v, q, m) for v in t.values))


# ---------------------------------------------------------------------------
# built-in kernels


def builtin_Psi(ctx: FieldCtx) -> TraceFunction:
    """The trace table of the homogeneous Artin-Schreier replacement on
    [A1/Gm]: 1 - q on the closed (zero) class, 1 on the open class."""
    orbits = build_A1(ctx).orbits()
    return TraceFunction(
        orbits, (cyc_from_int(1 - ctx.q, ctx.p), cyc_from_int(1, ctx.p))
    )


def builtin_Psi_prime(ctx: FieldCtx) -> TraceFunction:
    """The shriek-extension variant: 0 on the closed class, 1 on the open."""
    orbits = build_A1(ctx).orbits()
    return TraceFunction(orbits, (cyc_from_int(0, ctx.p), cyc_from_int(1, ctx.p)))


def builtin_Lpsi(ctx: FieldCtx) -> TraceFunction:
    """The additive character a -> psi_q(a) as a scheme-level function on A1."""
    orbits = build_A1(ctx).scheme().orbits()
    return TraceFunction(orbits, tuple(ctx.psi_idx(i) for i in range(ctx.q)))


# ---------------------------------------------------------------------------
# function files

SPACE_TAGS = ("V", "hV", "hVdual", "PV", "PVdual")


def space_for_tag(ctx: FieldCtx, r: int, tag: str) -> GSpace:
    if tag == "V":
        return build_V(ctx, r).scheme()
    if tag == "hV":
        return build_V(ctx, r)
    if tag == "hVdual":
        return build_V_dual(ctx, r)
    if tag == "PV":
        return build_PV(ctx, r)
    if tag == "PVdual":
        return _pv_dual(ctx, r)
    raise ConfigError(f"unknown space tag {tag!r}; expected one of {SPACE_TAGS}")


def _pv_dual(ctx: FieldCtx, r: int) -> GSpace:
    space = build_PV(ctx, r)
    return GSpace(ctx, r, space.action, space.enc, f"PV{r}dual")


def function_to_json(t: TraceFunction, tag: str, r: int) -> dict:
    ctx = t.orbits.ctx
    return {
        "p": ctx.p,
        "n": ctx.n,
        "r": r,
        "space": tag,
        "values": [cyc_to_json(v) for v in t.values],
    }


def function_from_json(doc: dict, psi_unit: int = 1) -> tuple[TraceFunction, str, int]:
    """Parse a function file into (function, space tag, r); strict validation."""
    try:
        p, n, r, tag = int(doc["p"]), int(doc["n"]), int(doc["r"]), doc["space"]
        raw_values = doc["values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed function file: {exc}") from exc
    ctx = field_make(p, n, psi_unit=psi_unit)
    space = space_for_tag(ctx, r, tag)
    values = []
    for rv in raw_values:
        try:
            v = cyc_from_json(rv)
        except ValueError as exc:
            raise ConfigError(f"malformed function file: {exc}") from exc
        if v.p != p:
            raise ConfigError(f"value over Q(zeta_{v.p}) in a p={p} function file")
        values.append(v)
    orbits = space.orbits()
    if len(values) != orbits.num_classes:
        raise ConfigError(
            f"function file has {len(values)} values, space {tag} (r={r}, q={ctx.q}) "
            f"has {orbits.num_classes} classes"
        )
    return TraceFunction(orbits, values), tag, r


def load_function(path: str, psi_unit: int = 1) -> tuple[TraceFunction, str, int]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return function_from_json(doc, psi_unit=psi_unit)


def dump_function(t: TraceFunction, tag: str, r: int, path: str | None) -> str:
    text = json.dumps(function_to_json(t, tag, r), indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
