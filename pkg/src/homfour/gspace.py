"""Finite point sets with split-torus actions, orbits, and equivariant maps.

A GSpace is an explicit list of m-tuples over a finite field together with an
action of (F_q^x)^k given by an integer weight matrix: the group element
g = (g_1..g_k) scales coordinate j by prod_i g_i^(A[i][j]).  Quotient stacks
enter only through their F_q-point groupoids: OrbitSet records isomorphism
classes (orbits) with automorphism group orders (stabilizers).

Points are stored encoded as base-q integers, coordinate 0 most significant,
so ascending encoded order is lexicographic order on tuples of element
indices.  The hot per-point loops live in homfour._kernels.
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from homfour import _kernels
from homfour.errors import ConfigError, EquivarianceError
from homfour.gf import FieldCtx

DEFAULT_SIZE_BOUND = 2048


def size_bound() -> int:
    """Configured q^r bound; HOMFOUR_SIZE_BOUND overrides the default."""
    raw = os.environ.get("HOMFOUR_SIZE_BOUND")
    if raw is None:
        return DEFAULT_SIZE_BOUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"HOMFOUR_SIZE_BOUND must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ConfigError(f"HOMFOUR_SIZE_BOUND must be at least 2, got {value}")
    return value


def check_size(ctx: FieldCtx, r: int, bound: int | None = None) -> None:
    limit = size_bound() if bound is None else bound
    if ctx.q**r > limit:
        raise ConfigError(
            f"space size q^r = {ctx.q}^{r} = {ctx.q**r} exceeds the bound {limit}"
        )


class TorusAction:
    """Action of (F_q^x)^k on m coordinates via an integer weight matrix."""

    __slots__ = ("k", "m", "weights")

    def __init__(self, weights: Sequence[Sequence[int]], m: int):
        rows = tuple(tuple(int(w) for w in row) for row in weights)
        for row in rows:
            if len(row) != m:
                raise ValueError(f"weight row {row} has length {len(row)}, expected {m}")
        object.__setattr__(self, "weights", rows)
        object.__setattr__(self, "k", len(rows))
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("TorusAction is immutable")

    def __repr__(self) -> str:
        return f"TorusAction(k={self.k}, m={self.m}, weights={self.weights})"


class GSpace:
    """An ordered finite point set with a torus action.

    enc is the sorted int64 array of encoded points; it must be closed under
    the action and duplicate-free (both verified here).
    """

    def __init__(self, ctx: FieldCtx, m: int, action: TorusAction, enc: np.ndarray, name: str):
        if action.m != m:
            raise ValueError(f"action is over {action.m} coordinates, space has {m}")
        enc = np.asarray(enc, dtype=np.int64)
        enc = np.sort(enc)
        if len(np.unique(enc)) != len(enc):
            raise ValueError(f"duplicate points in {name}")
        self.ctx = ctx
        self.m = m
        self.action = action
        self.enc = enc
        self.name = name
        self._orbits: OrbitSet | None = None
        self._validate_closure()

    @property
    def k(self) -> int:
        return self.action.k

    @property
    def size(self) -> int:
        return len(self.enc)

    @property
    def group_order(self) -> int:
        return (self.ctx.q - 1) ** self.k

    @cached_property
    def group_elements(self) -> tuple[tuple[int, ...], ...]:
        """All (q-1)^k torus elements as tuples of unit indices, lex order."""
        units = range(1, self.ctx.q)
        out = [()]
        for _ in range(self.k):
            out = [g + (u,) for g in out for u in units]
        return tuple(out)

    @cached_property
    def chis(self) -> np.ndarray:
        """int64[G, m]: per group element, the scalar index acting on each coordinate."""
        return _weight_chis(self.ctx, self.action.weights, self.m, self.group_elements)

    def _validate_closure(self) -> None:
        for gi, chi in enumerate(self.chis):
            moved = _kernels.act_all(self.enc, chi, self.ctx.mul_table, self.ctx.q, self.m)
            bad = _kernels.find_missing(self.enc, np.sort(moved))
            if bad != -1:
                g = self.group_elements[gi]
                raise ValueError(f"{self.name} is not closed under the action at g={g}")

    def encode(self, point: Sequence[int]) -> int:
        e = 0
        for c in point:
            e = e * self.ctx.q + int(c)
        return e

    def decode(self, e: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(int(e % self.ctx.q))
            e //= self.ctx.q
        return tuple(reversed(out))

    def position(self, e: int) -> int:
        """Index of the encoded point in the sorted point list."""
        pos = int(np.searchsorted(self.enc, e))
        if pos >= len(self.enc) or self.enc[pos] != e:
            raise KeyError(f"point {self.decode(e)} not in {self.name}")
        return pos

    def points(self) -> Iterable[tuple[int, ...]]:
        return (self.decode(int(e)) for e in self.enc)

    def point_str(self, e: int) -> str:
        coords = ", ".join(str(self.ctx.elem(c)) for c in self.decode(e))
        return f"({coords})"

    def scheme(self) -> "GSpace":
        """The same point set with the trivial torus (k=0)."""
        return GSpace(self.ctx, self.m, TorusAction((), self.m), self.enc, f"{self.name}^sch")

    def orbits(self) -> "OrbitSet":
        """The orbit decomposition, computed once per space."""
        if self._orbits is None:
            self._orbits = OrbitSet(self)
        return self._orbits

    def same_space(self, other: "GSpace") -> bool:
        """Structural equality: same field, points, and action."""
        return (
            self.ctx is other.ctx
            and self.m == other.m
            and self.action.weights == other.action.weights
            and len(self.enc) == len(other.enc)
            and bool(np.all(self.enc == other.enc))
        )

    def with_action(self, weights: Sequence[Sequence[int]], name: str) -> "GSpace":
        """The same point set under a different (validated) action."""
        return GSpace(self.ctx, self.m, TorusAction(weights, self.m), self.enc, name)

    def __repr__(self) -> str:
        return f"GSpace({self.name}, q={self.ctx.q}, m={self.m}, k={self.k}, size={self.size})"


def _weight_chis(
    ctx: FieldCtx,
    weights: Sequence[Sequence[int]],
    m: int,
    group_elements: Sequence[tuple[int, ...]],
) -> np.ndarray:
    out = np.empty((len(group_elements), m), dtype=np.int64)
    for gi, g in enumerate(group_elements):
        for j in range(m):
            s = 1
            for i, gu in enumerate(g):
                s = ctx.mul(s, ctx.pow(gu, weights[i][j]))
            out[gi, j] = s
    return out


class OrbitSet:
    """Orbit decomposition of a GSpace: the isomorphism classes of its quotient.

    Representatives are the lexicographically least points of their orbits, in
    ascending order.  Stabilizer orders are counted directly and checked
    against the orbit-stabilizer identity.
    """

    def __init__(self, space: GSpace):
        self.space = space
        ctx = space.ctx
        canon = _kernels.min_canon(space.enc, space.chis, ctx.mul_table, ctx.q, space.m)
        reps, class_of_pos, sizes = np.unique(canon, return_inverse=True, return_counts=True)
        stabs = np.zeros(len(reps), dtype=np.int64)
        for chi in space.chis:
            moved = _kernels.act_all(reps, chi, ctx.mul_table, ctx.q, space.m)
            stabs += moved == reps
        order = space.group_order
        if not np.all(stabs * sizes == order):
            raise AssertionError(f"orbit-stabilizer identity fails on {space.name}")
        if int(sizes.sum()) != space.size:
            raise AssertionError(f"orbit sizes do not cover {space.name}")
        self.reps = reps
        self.class_of_pos = class_of_pos.astype(np.int64)
        self.sizes = sizes.astype(np.int64)
        self.stabs = stabs
        self.num_classes = len(reps)

    @property
    def ctx(self) -> FieldCtx:
        return self.space.ctx

    def class_of_enc(self, e: int) -> int:
        arr = np.array([e], dtype=np.int64)
        ctx = self.space.ctx
        canon = _kernels.min_canon(arr, self.space.chis, ctx.mul_table, ctx.q, self.space.m)
        pos = int(np.searchsorted(self.reps, canon[0]))
        if pos >= len(self.reps) or self.reps[pos] != canon[0]:
            raise KeyError(f"point not in {self.space.name}")
        return pos

    def class_of_point(self, point: Sequence[int]) -> int:
        return self.class_of_enc(self.space.encode(point))

    def rep_point(self, i: int) -> tuple[int, ...]:
        return self.space.decode(int(self.reps[i]))

    def rep_str(self, i: int) -> str:
        return self.space.point_str(int(self.reps[i]))

    def __repr__(self) -> str:
        return f"OrbitSet({self.space.name}, classes={self.num_classes})"


def orbit_set(space: GSpace) -> OrbitSet:
    return OrbitSet(space)


class EquivariantMap:
    """A validated equivariant map between GSpaces.

    gpmap is a k_src x k_tgt integer matrix sending g to the target group
    element with coordinates prod_i g_i^(gpmap[i][j]).  Equivariance
    f(g.x) = gpmap(g).f(x) is checked exhaustively at construction and a
    violating (x, g) is reported if found.
    """

    def __init__(
        self,
        source: GSpace,
        target: GSpace,
        img_enc: np.ndarray,
        gpmap: Sequence[Sequence[int]],
        name: str,
    ):
        if source.ctx is not target.ctx and (source.ctx.p, source.ctx.n) != (
            target.ctx.p,
            target.ctx.n,
        ):
            raise ValueError("source and target live over different fields")
        rows = tuple(tuple(int(x) for x in row) for row in gpmap)
        if len(rows) != source.k or any(len(row) != target.k for row in rows):
            raise ValueError(
                f"gpmap must be {source.k}x{target.k} for {name}, got {rows}"
            )
        self.source = source
        self.target = target
        self.img_enc = np.asarray(img_enc, dtype=np.int64)
        self.gpmap = rows
        self.name = name
        self._validate()

    def _validate(self) -> None:
        src, tgt = self.source, self.target
        ctx = src.ctx
        bad = _kernels.find_missing(tgt.enc, np.sort(self.img_enc.copy()))
        if bad != -1:
            order = np.argsort(self.img_enc, kind="stable")
            culprit = int(self.img_enc[order[bad]])
            raise ValueError(
                f"{self.name}: image point {tgt.decode(culprit)} is not in {tgt.name}"
            )
        composite = tuple(
            tuple(
                sum(self.gpmap[i][j] * tgt.action.weights[j][c] for j in range(tgt.k))
                for c in range(tgt.m)
            )
            for i in range(src.k)
        )
        chis_tgt = _weight_chis(ctx, composite, tgt.m, src.group_elements)
        g, i = _kernels.equiv_violation(
            src.enc, self.img_enc, src.chis, chis_tgt, ctx.mul_table, ctx.q
        )
        if g != -1:
            raise EquivarianceError(
                f"{self.name} is not equivariant",
                point=src.decode(int(src.enc[i])),
                group_elem=src.group_elements[g],
            )

    @cached_property
    def img_pos(self) -> np.ndarray:
        """Target point position for each source point position."""
        return np.searchsorted(self.target.enc, self.img_enc).astype(np.int64)

    @cached_property
    def cls_img(self) -> np.ndarray:
        """class_image for the maps' own cached orbit sets."""
        return self.class_image(self.source.orbits(), self.target.orbits())

    def class_image(self, src_orbits: OrbitSet, tgt_orbits: OrbitSet) -> np.ndarray:
        """Target class index for each source class (well-defined by equivariance)."""
        ctx = self.source.ctx
        rep_pos = np.searchsorted(self.source.enc, src_orbits.reps)
        imgs = self.img_enc[rep_pos]
        canon = _kernels.min_canon(
            imgs, self.target.chis, ctx.mul_table, ctx.q, self.target.m
        )
        return np.searchsorted(tgt_orbits.reps, canon).astype(np.int64)

    def __repr__(self) -> str:
        return f"EquivariantMap({self.name}: {self.source.name} -> {self.target.name})"


def emap(
    source: GSpace,
    target: GSpace,
    pointmap: Callable[[tuple[int, ...]], Sequence[int]],
    gpmap: Sequence[Sequence[int]],
    name: str = "f",
) -> EquivariantMap:
    """Build and validate an equivariant map from a per-point function.

    pointmap receives and returns tuples of field element indices.
    """
    img = np.empty(source.size, dtype=np.int64)
    q = source.ctx.q
    for i, e in enumerate(source.enc):
        out = pointmap(source.decode(int(e)))
        v = 0
        for c in out:
            v = v * q + int(c)
        img[i] = v
    return EquivariantMap(source, target, img, gpmap, name)


# ---------------------------------------------------------------------------
# space builders


def build_V(ctx: FieldCtx, r: int, bound: int | None = None, name: str | None = None) -> GSpace:
    """V = F_q^r with the homothety action (k=1, all weights 1)."""
    if r < 1:
        raise ConfigError(f"r must be at least 1, got {r}")
    check_size(ctx, r, bound)
    enc = np.arange(ctx.q**r, dtype=np.int64)
    return GSpace(ctx, r, TorusAction(((1,) * r,), r), enc, name or f"V{r}")


def build_V_dual(ctx: FieldCtx, r: int, bound: int | None = None) -> GSpace:
    return build_V(ctx, r, bound, name=f"V{r}dual")


def build_A1(ctx: FieldCtx) -> GSpace:
    return GSpace(ctx, 1, TorusAction(((1,),), 1), np.arange(ctx.q, dtype=np.int64), "A1")


def build_Gm(ctx: FieldCtx) -> GSpace:
    enc = np.arange(1, ctx.q, dtype=np.int64)
    return GSpace(ctx, 1, TorusAction(((1,),), 1), enc, "Gm")


def build_point(ctx: FieldCtx, torus_rank: int = 0) -> GSpace:
    """One point under a rank-k torus acting trivially (k=1 models BGm)."""
    weights = tuple(() for _ in range(torus_rank))
    return GSpace(
        ctx, 0, TorusAction(weights, 0), np.zeros(1, dtype=np.int64),
        "pt" if torus_rank == 0 else f"pt/Gm^{torus_rank}",
    )


def projective_points(ctx: FieldCtx, r: int) -> list[tuple[int, ...]]:
    """Representatives of P^(r-1)(F_q), first nonzero coordinate 1, lex order."""
    if r < 1:
        raise ConfigError(f"r must be at least 1, got {r}")
    out = []
    for lead in range(r):
        prefix = (0,) * lead + (1,)
        tails = [()]
        for _ in range(r - lead - 1):
            tails = [t + (c,) for t in tails for c in range(ctx.q)]
        out.extend(prefix + t for t in tails)
    out.sort()
    return out


def build_PV(ctx: FieldCtx, r: int, bound: int | None = None) -> GSpace:
    """P(V)(F_q) as a scheme: normalized representatives, trivial torus."""
    check_size(ctx, r, bound)
    enc = np.array(
        [_encode_tuple(ctx.q, pt) for pt in projective_points(ctx, r)], dtype=np.int64
    )
    return GSpace(ctx, r, TorusAction((), r), enc, f"PV{r}")


def _encode_tuple(q: int, point: Sequence[int]) -> int:
    e = 0
    for c in point:
        e = e * q + int(c)
    return e


def product(a: GSpace, b: GSpace, name: str | None = None) -> GSpace:
    """Product space, a's coordinates most significant, block-diagonal action."""
    if a.ctx is not b.ctx:
        raise ValueError("product factors must share a field context")
    m = a.m + b.m
    weights = tuple(
        tuple(row) + (0,) * b.m for row in a.action.weights
    ) + tuple((0,) * a.m + tuple(row) for row in b.action.weights)
    shift = a.ctx.q**b.m
    enc = (a.enc[:, None] * shift + b.enc[None, :]).ravel()
    return GSpace(a.ctx, m, TorusAction(weights, m), enc, name or f"{a.name}x{b.name}")


def pairing(ctx: FieldCtx, w: Sequence[int], v: Sequence[int]) -> int:
    """Index of sum_i w_i * v_i in F_q."""
    if len(w) != len(v):
        raise ValueError(f"pairing length mismatch: {len(w)} vs {len(v)}")
    acc = 0
    for wi, vi in zip(w, v):
        acc = ctx.add(acc, ctx.mul(int(wi), int(vi)))
    return acc


def incidence(ctx: FieldCtx, r: int) -> set[tuple[int, int]]:
    """Pairs (w_index, v_index) of projective representatives with <w,v> = 0."""
    reps = projective_points(ctx, r)
    out = set()
    for wi, w in enumerate(reps):
        for vi, v in enumerate(reps):
            if pairing(ctx, w, v) == 0:
                out.add((wi, vi))
    return out


# ---------------------------------------------------------------------------
# named map constructors


def map_rho(ctx: FieldCtx, r: int, dual: bool = False) -> EquivariantMap:
    """Quotient map from the scheme V (or its dual) to the homothety quotient."""
    tgt = build_V_dual(ctx, r) if dual else build_V(ctx, r)
    src = tgt.scheme()
    return emap(src, tgt, lambda x: x, (), "rho_dual" if dual else "rho")


def map_pr(hs_product: GSpace, r: int, side: str) -> EquivariantMap:
    """Projection from [V_dual x V / Gm^2] to one homothety quotient factor.

    side 'w' keeps the first r coordinates (dual factor), side 'v' the last r.
    """
    ctx = hs_product.ctx
    shift = np.int64(ctx.q**r)
    if side == "w":
        tgt = build_V_dual(ctx, r)
        return EquivariantMap(hs_product, tgt, hs_product.enc // shift, ((1,), (0,)), "pr_dual")
    tgt = build_V(ctx, r)
    return EquivariantMap(hs_product, tgt, hs_product.enc % shift, ((0,), (1,)), "pr")


def pairing_table(ctx: FieldCtx, r: int) -> np.ndarray:
    """uint8[q^r, q^r] of <w, v> element indices over all encoded r-vectors."""
    enc = np.arange(ctx.q**r, dtype=np.int64)
    identity = np.arange(ctx.q, dtype=np.uint8)
    return _kernels.pair_trace(
        enc, enc, r, ctx.q, ctx.mul_table, ctx.add_table, identity
    )


def map_mu(hs_product: GSpace, r: int) -> EquivariantMap:
    """The pairing [V_dual x V / Gm^2] -> [A1/Gm], (w, v) -> <w, v>."""
    ctx = hs_product.ctx
    tgt = build_A1(ctx)
    shift = np.int64(ctx.q**r)
    table = pairing_table(ctx, r)
    img = table[hs_product.enc // shift, hs_product.enc % shift].astype(np.int64)
    return EquivariantMap(hs_product, tgt, img, ((1,), (1,)), "mu")


def map_diag(ctx: FieldCtx, r: int) -> EquivariantMap:
    """Diagonal [V/Gm] -> [V x V / Gm^2]."""
    src = build_V(ctx, r)
    tgt = product(build_V(ctx, r), build_V(ctx, r))
    return emap(src, tgt, lambda x: x + x, ((1, 1),), "diag")


def map_antidiag_quotient(ctx: FieldCtx, r: int) -> EquivariantMap:
    """Quotient of the scheme V_dual x V by the anti-diagonal Gm action
    t.(w, v) = (t^-1 w, t v)."""
    sch = product(build_V_dual(ctx, r).scheme(), build_V(ctx, r).scheme())
    tgt = sch.with_action(((-1,) * r + (1,) * r,), f"(V{r}dualxV{r})/antidiag")
    return emap(sch, tgt, lambda x: x, (), "R")


def map_torsor_A1(ctx: FieldCtx) -> EquivariantMap:
    """Quotient map from the scheme A1 to [A1/Gm]."""
    tgt = build_A1(ctx)
    return emap(tgt.scheme(), tgt, lambda x: x, (), "f_torsor")


def map_sigma(ctx: FieldCtx) -> EquivariantMap:
    """Difference map [A2/Gm diagonal] -> [A1/Gm], (x, y) -> x - y."""
    src = GSpace(
        ctx, 2, TorusAction(((1, 1),), 2), np.arange(ctx.q**2, dtype=np.int64), "A2/diag"
    )
    tgt = build_A1(ctx)
    return emap(
        src, tgt, lambda x: (ctx.add(x[0], ctx.neg(x[1])),), ((1,),), "sigma"
    )


def map_qquot(ctx: FieldCtx) -> EquivariantMap:
    """Quotient [A2/Gm diagonal] -> [A1/Gm] x [A1/Gm]."""
    src = GSpace(
        ctx, 2, TorusAction(((1, 1),), 2), np.arange(ctx.q**2, dtype=np.int64), "A2/diag"
    )
    tgt = product(build_A1(ctx), build_A1(ctx))
    return emap(src, tgt, lambda x: x, ((1, 1),), "q_quot")


def map_nu(ctx: FieldCtx, r: int) -> EquivariantMap:
    """[V x V_dual x V / Gm^3] -> [A1/Gm]^2, (v1, w, v2) -> (<w,v1>, <w,v2>)."""
    src = product(product(build_V(ctx, r), build_V_dual(ctx, r)), build_V(ctx, r))
    tgt = product(build_A1(ctx), build_A1(ctx))
    def f(x: tuple[int, ...]) -> tuple[int, int]:
        v1, w, v2 = x[:r], x[r : 2 * r], x[2 * r :]
        return (pairing(ctx, w, v1), pairing(ctx, w, v2))
    return emap(src, tgt, f, ((1, 0), (1, 1), (0, 1)), "nu")


def map_pr13(ctx: FieldCtx, r: int) -> EquivariantMap:
    """[V x V_dual x V / Gm^3] -> [V x V / Gm^2], keep outer factors."""
    src = product(product(build_V(ctx, r), build_V_dual(ctx, r)), build_V(ctx, r))
    tgt = product(build_V(ctx, r), build_V(ctx, r))
    return emap(
        src, tgt, lambda x: x[:r] + x[2 * r :], ((1, 0), (0, 0), (0, 1)), "pr13"
    )


def map_linear(
    ctx: FieldCtx, matrix: Sequence[Sequence[int]], dual: bool = False, name: str = "f"
) -> EquivariantMap:
    """Linear map between homothety quotients, v -> v.M (row convention).

    matrix is r x s over element indices; with dual=True both spaces are the
    dual-side quotients (used for transposes).
    """
    r = len(matrix)
    s = len(matrix[0]) if r else 0
    build = build_V_dual if dual else build_V
    src, tgt = build(ctx, r), build(ctx, s)
    def f(x: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for j in range(s):
            acc = 0
            for i in range(r):
                acc = ctx.add(acc, ctx.mul(x[i], int(matrix[i][j])))
            out.append(acc)
        return tuple(out)
    return emap(src, tgt, f, ((1,),), name)


def transpose_matrix(matrix: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(row[j]) for row in matrix) for j in range(len(matrix[0])))


def map_zero_section(ctx: FieldCtx, r: int) -> EquivariantMap:
    """Zero section BGm -> [V/Gm]."""
    src = build_point(ctx, torus_rank=1)
    tgt = build_V(ctx, r)
    return emap(src, tgt, lambda x: (0,) * r, ((1,),), "i_zero")


def map_structural(ctx: FieldCtx, r: int, dual: bool = False) -> EquivariantMap:
    """Structural map [V/Gm] -> BGm."""
    src = build_V_dual(ctx, r) if dual else build_V(ctx, r)
    tgt = build_point(ctx, torus_rank=1)
    return emap(src, tgt, lambda x: (), ((1,),), "pi")


def map_structural_to_point(space: GSpace) -> EquivariantMap:
    """Structural map to the plain point (trivial torus)."""
    tgt = build_point(space.ctx, torus_rank=0)
    gpmap = tuple(() for _ in range(space.k))
    return emap(space, tgt, lambda x: (), gpmap, "h")


def map_section_PV(ctx: FieldCtx, r: int, dual: bool = False) -> EquivariantMap:
    """P(V) (scheme of normalized representatives) -> [V/Gm]; pushforward
    along this map is extension by zero across the zero class."""
    src = build_PV(ctx, r)
    tgt = build_V_dual(ctx, r) if dual else build_V(ctx, r)
    return emap(src, tgt, lambda x: x, (), "j_section")
