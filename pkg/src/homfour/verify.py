"""Named identity checks over a (q, r) grid, with deterministic reports.

Every check runs the exhaustive delta-basis first, then seeded random
functions; all comparisons are exact.  The per-(check, cell) random stream is
derived by mixing the suite seed with the check id and the cell parameters,
so any subset of checks or cells reproduces the exact functions a full run
would use.

The generator is xorshift64* (shifts 12, 25, 27, multiplier
2685821657736338717, 64-bit wraparound); the seed mix is 64-bit FNV-1a over
"check:p:n:r:seed".  Both are fixed so independent implementations can agree
on witnesses.
"""

from __future__ import annotations

import json
import time
from typing import Callable
from dataclasses import dataclass, field

from homfour.cyclotomic import CycRat, cyc_div_int, cyc_from_int, zeta_pow
from homfour.errors import ConfigError
from homfour.gf import FieldCtx, field_make
from homfour.gspace import (
    OrbitSet,
    build_A1,
    build_PV,
    build_point,
    build_V,
    check_size,
    emap,
    map_diag,
    map_linear,
    map_nu,
    map_pr13,
    map_section_PV,
    map_sigma,
    map_qquot,
    map_structural,
    map_structural_to_point,
    map_torsor_A1,
    map_zero_section,
    product,
    size_bound,
    transpose_matrix,
)
from homfour.tracefn import (
    TraceFunction,
    builtin_Lpsi,
    builtin_Psi,
    constant,
    delta,
    pullback,
    pushforward_shriek,
    shift,
    tate_twist,
    tensor,
)
from homfour.transforms import (
    HomSpace,
    four_deligne,
    four_hom,
    four_hom_bgm_definitional,
    four_hom_definitional,
    four_hom_dual,
    radon,
    radon_double,
    rho_pullback,
    rho_pullback_dual,
)

_MASK = (1 << 64) - 1


class XorShift64Star:
    """xorshift64* with the documented constants; deterministic across platforms."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK
        s ^= s >> 27
        self.state = s
        return (s * 2685821657736338717) & _MASK

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-enough integer in [lo, hi] (modulo bias is irrelevant here)."""
        return lo + self.next_u64() % (hi - lo + 1)


def mix_seed(seed: int, check: str, p: int, n: int, r: int) -> int:
    """64-bit FNV-1a over 'check:p:n:r:seed'."""
    h = 0xCBF29CE484222325
    for b in f"{check}:{p}:{n}:{r}:{seed}".encode():
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def random_function(orbits: OrbitSet, rng: XorShift64Star) -> TraceFunction:
    """Integer-plus-root-of-unity values u + v*zeta^a, u, v in [-q^2, q^2]."""
    ctx = orbits.ctx
    bound = ctx.q * ctx.q
    values = []
    for _ in range(orbits.num_classes):
        u = rng.randint(-bound, bound)
        v = rng.randint(-bound, bound)
        a = rng.randint(0, ctx.p - 1)
        values.append(cyc_from_int(u, ctx.p) + zeta_pow(ctx.p, a) * v)
    return TraceFunction(orbits, values)


@dataclass
class CheckResult:
    check: str
    p: int
    n: int
    r: int
    seed: int
    status: str
    detail: str = ""
    witness: dict | None = None
    time_s: float = 0.0

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def passed(self) -> bool:
        return self.status == "pass"


DEFAULT_PAIRS = ((2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2))
DEFAULT_RS = (1, 2, 3)


@dataclass
class GridSpec:
    pairs: tuple[tuple[int, int], ...] = DEFAULT_PAIRS
    rs: tuple[int, ...] = DEFAULT_RS
    random_count: int = 100
    seed: int = 1
    bound: int | None = None

    def __post_init__(self):
        self.pairs = tuple((int(p), int(n)) for p, n in self.pairs)
        self.rs = tuple(int(r) for r in self.rs)
        limit = size_bound() if self.bound is None else self.bound
        for p, n in self.pairs:
            ctx = field_make(p, n)
            for r in self.rs:
                if r < 1:
                    raise ConfigError(f"r must be >= 1, got {r}")
                check_size(ctx, r, limit)

    def cells(self):
        for p, n in self.pairs:
            for r in self.rs:
                yield p, n, r


@dataclass
class Cell:
    """One (field, rank) grid point plus the suite-level knobs."""

    ctx: FieldCtx
    r: int
    random_count: int
    seed: int

    def rng_for(self, check: str) -> XorShift64Star:
        return XorShift64Star(mix_seed(self.seed, check, self.ctx.p, self.ctx.n, self.r))


_HS_CACHE: dict[tuple[int, int, int, int], HomSpace] = {}


def _homspace(ctx: FieldCtx, r: int) -> HomSpace:
    key = (ctx.p, ctx.n, ctx.psi_unit, r)
    hs = _HS_CACHE.get(key)
    if hs is None:
        hs = HomSpace(ctx, r)
        _HS_CACHE[key] = hs
    return hs


def _candidates(orbits: OrbitSet, rng: XorShift64Star, count: int):
    """The delta-basis followed by seeded random functions, labeled."""
    for i in range(orbits.num_classes):
        yield ("delta", i, delta(orbits, i))
    for j in range(count):
        yield ("random", j, random_function(orbits, rng))


def _first_diff(a: TraceFunction, b: TraceFunction) -> int:
    for i, (x, y) in enumerate(zip(a.values, b.values)):
        if x != y:
            return i
    return -1


def _result(cell: Cell, check: str, status: str, detail: str, witness: dict | None = None) -> CheckResult:
    return CheckResult(
        check=check,
        p=cell.ctx.p,
        n=cell.ctx.n,
        r=cell.r,
        seed=cell.seed,
        status=status,
        detail=detail,
        witness=witness,
    )


def _scan(cell: Cell, check: str, orbits: OrbitSet, pair_fn, detail_pass: str) -> CheckResult:
    """Run pair_fn over the candidate stream; fail on the first mismatch."""
    rng = cell.rng_for(check)
    tested = 0
    for kind, idx, t in _candidates(orbits, rng, cell.random_count):
        lhs, rhs = pair_fn(t)
        bad = _first_diff(lhs, rhs)
        if bad != -1:
            witness = {
                "kind": kind,
                "index": idx,
                "class": bad,
                "mixed_seed": mix_seed(cell.seed, check, cell.ctx.p, cell.ctx.n, cell.r),
            }
            return _result(
                cell, check, "fail",
                f"{kind}[{idx}] differs at class {bad}: {lhs.values[bad]} vs {rhs.values[bad]}",
                witness,
            )
        tested += 1
    return _result(cell, check, "pass", f"{tested} functions; {detail_pass}")


# ---------------------------------------------------------------------------
# the checks


def check_thm22(cell: Cell) -> CheckResult:
    """Descent comparison: the vector-space transform of the invariant
    extension equals the invariant extension of the homogeneous transform."""
    hs = _homspace(cell.ctx, cell.r)
    def pair(t):
        lhs = four_deligne(cell.ctx, cell.r, rho_pullback(hs, t))
        rhs = rho_pullback_dual(hs, four_hom(hs, t))
        return lhs, rhs
    return _scan(cell, "thm22", hs.hV.orbits(), pair, "descent comparison exact")


def check_thm31(cell: Cell) -> CheckResult:
    """Involutivity: transforming twice multiplies by q^r."""
    hs = _homspace(cell.ctx, cell.r)
    factor = cell.ctx.q**cell.r
    def pair(t):
        return four_hom_dual(hs, four_hom(hs, t)), t.scale(factor)
    return _scan(cell, "thm31", hs.hV.orbits(), pair, f"factor q^r = {factor}")


def check_prop16(cell: Cell) -> CheckResult:
    """Incidence devissage: on projective classes, the transform of the
    zero-extension splits into a constant term and q times the Radon sum."""
    ctx, r = cell.ctx, cell.r
    hs = _homspace(ctx, r)
    j = map_section_PV(ctx, r)
    pv = j.source.orbits()
    npts = pv.num_classes
    sign = -1 if (r - 1) % 2 else 1
    def pair(g):
        ext = pushforward_shriek(j, g)
        rad = radon(ctx, r, g)
        lhs = TraceFunction(rad.orbits, four_hom(hs, ext).values[1:])
        total = cyc_from_int(0, ctx.p)
        for v in g.values:
            total = total + v
        rhs = TraceFunction(
            rad.orbits, tuple(total * sign + rv * ctx.q for rv in rad.values)
        )
        return lhs, rhs
    return _scan(cell, "prop16", pv, pair, f"{npts} projective classes")


def check_lemma17(cell: Cell) -> CheckResult:
    """Linear functoriality at small rank: transform of the pushforward
    equals the shifted pullback along the transpose."""
    ctx = cell.ctx
    rng = cell.rng_for("lemma17")
    one, zero = 1, 0
    cases = [
        ("inclusion", ((one, zero),)),
        ("projection", ((one,), (zero,))),
        ("zero", ((zero, zero), (zero, zero))),
        ("invertible", _random_invertible(ctx, rng)),
    ]
    tested = 0
    for label, matrix in cases:
        r, s = len(matrix), len(matrix[0])
        f = map_linear(ctx, matrix, name=f"f_{label}")
        tf = map_linear(ctx, transpose_matrix(matrix), dual=True, name=f"tf_{label}")
        hs_r, hs_s = _homspace(ctx, r), _homspace(ctx, s)
        src = hs_r.hV.orbits()
        for kind, idx, t in _candidates(src, rng, cell.random_count):
            lhs = four_hom(hs_s, pushforward_shriek(f, t))
            rhs = shift(pullback(tf, four_hom(hs_r, t)), s - r)
            bad = _first_diff(lhs, rhs)
            if bad != -1:
                return _result(
                    cell, "lemma17", "fail",
                    f"{label}: {kind}[{idx}] differs at class {bad}",
                    {"case": label, "kind": kind, "index": idx, "class": bad},
                )
            tested += 1
    return _result(cell, "lemma17", "pass", f"{tested} functions over {len(cases)} maps")


def _random_invertible(ctx: FieldCtx, rng: XorShift64Star) -> tuple[tuple[int, int], ...]:
    while True:
        a, b, c, d = (rng.randint(0, ctx.q - 1) for _ in range(4))
        det = ctx.add(ctx.mul(a, d), ctx.neg(ctx.mul(b, c)))
        if det != 0:
            return ((a, b), (c, d))


def check_prop18(cell: Cell) -> CheckResult:
    """Rank-0 base case: the definitional transform on BGm is the identity,
    and the transform of the zero-section pushforward is the shifted
    structural pullback."""
    ctx, r = cell.ctx, cell.r
    bgm = build_point(ctx, torus_rank=1).orbits()
    rng = cell.rng_for("prop18")
    hs = _homspace(ctx, r)
    i_map = map_zero_section(ctx, r)
    pi_dual = map_structural(ctx, r, dual=True)
    tested = 0
    for kind, idx, t in _candidates(bgm, rng, cell.random_count):
        ident = four_hom_bgm_definitional(ctx, t)
        bad = _first_diff(ident, t)
        if bad != -1:
            return _result(cell, "prop18", "fail",
                           f"BGm transform is not the identity on {kind}[{idx}]",
                           {"kind": kind, "index": idx, "class": bad})
        t_on_bgm = TraceFunction(pi_dual.target.orbits(), t.values)
        lhs = four_hom(hs, pushforward_shriek(i_map, t))
        rhs = shift(pullback(pi_dual, t_on_bgm), r)
        bad = _first_diff(lhs, rhs)
        if bad != -1:
            return _result(cell, "prop18", "fail",
                           f"zero-section comparison fails on {kind}[{idx}] at class {bad}",
                           {"kind": kind, "index": idx, "class": bad})
        tested += 1
    return _result(cell, "prop18", "pass", f"{tested} functions; identity table")


def check_thm31_kernel(cell: Cell) -> CheckResult:
    """The composed kernel of the double transform: the engine value of the
    pull-tensor-push through (v1, w, v2) -> (<w,v1>, <w,v2>) equals q^r times
    the diagonal pushforward of the constant 1."""
    ctx, r = cell.ctx, cell.r
    nu = map_nu(ctx, r)
    pr13 = map_pr13(ctx, r)
    AA = nu.target
    pr1 = emap(AA, build_A1(ctx), lambda x: (x[0],), ((1,), (0,)), "pr1")
    pr2 = emap(AA, build_A1(ctx), lambda x: (x[1],), ((0,), (1,)), "pr2")
    psi = builtin_Psi(ctx)
    psi_box = tensor(pullback(pr1, psi), pullback(pr2, psi))
    lhs = pushforward_shriek(pr13, pullback(nu, psi_box))
    diag = map_diag(ctx, r)
    rhs = tate_twist(pushforward_shriek(diag, constant(diag.source.orbits(), 1)), -r)
    bad = _first_diff(lhs, rhs)
    if bad != -1:
        return _result(cell, "thm31_kernel", "fail",
                       f"kernel differs at class {bad}: {lhs.values[bad]} vs {rhs.values[bad]}",
                       {"class": bad})
    return _result(cell, "thm31_kernel", "pass",
                   f"q^r = {ctx.q**r} on the diagonal, 0 elsewhere")


def check_kernel_calculus(cell: Cell) -> CheckResult:
    """The table of the homogeneous kernel via independent routes, plus its
    vanishing total mass."""
    ctx = cell.ctx
    p, q = ctx.p, ctx.q
    psi = builtin_Psi(ctx)
    a1_scheme = build_A1(ctx).scheme()
    # (a) everywhere-1-except-a function sums to zero over the affine line
    pt = a1_scheme.orbits()
    vals = [cyc_from_int(1, p)] * q
    vals[1] = cyc_from_int(1 - q, p)
    h = map_structural_to_point(a1_scheme)
    mass_a = pushforward_shriek(h, TraceFunction(pt, vals)).values[0]
    if not mass_a.is_zero():
        return _result(cell, "kernel_calculus", "fail", f"torsor mass is {mass_a}, not 0")
    # (b) pushforward of the additive character along the torsor map
    f = map_torsor_A1(ctx)
    psi_engine = shift(pushforward_shriek(f, builtin_Lpsi(ctx)), 1)
    bad = _first_diff(psi_engine, psi)
    if bad != -1:
        return _result(cell, "kernel_calculus", "fail",
                       f"character pushforward gives {psi_engine.values}, "
                       f"expected (1-q, 1) order")
    # (c) Behrend mass of the kernel is zero
    hbar = map_structural_to_point(build_A1(ctx))
    mass = pushforward_shriek(hbar, psi).values[0]
    if not mass.is_zero():
        return _result(cell, "kernel_calculus", "fail", f"kernel mass is {mass}, not 0")
    # (d) the four-class external square via the difference map
    sig, qq = map_sigma(ctx), map_qquot(ctx)
    lhs = shift(pushforward_shriek(qq, pullback(sig, psi)), 1)
    AA = qq.target
    pr1 = emap(AA, build_A1(ctx), lambda x: (x[0],), ((1,), (0,)), "pr1")
    pr2 = emap(AA, build_A1(ctx), lambda x: (x[1],), ((0,), (1,)), "pr2")
    box = tensor(pullback(pr1, psi), pullback(pr2, psi))
    bad = _first_diff(lhs, TraceFunction(lhs.orbits, box.values))
    if bad != -1:
        return _result(cell, "kernel_calculus", "fail",
                       f"difference-map square differs at class {bad}")
    expected = [
        cyc_from_int((1 - q) * (1 - q), p),
        cyc_from_int(1 - q, p),
        cyc_from_int(1 - q, p),
        cyc_from_int(1, p),
    ]
    if list(lhs.values) != expected:
        return _result(cell, "kernel_calculus", "fail",
                       f"square table is {lhs.values}, expected {expected}")
    return _result(cell, "kernel_calculus", "pass",
                   f"table (1, {1 - q}); square (1, {1 - q}, {1 - q}, {(1 - q) ** 2}); mass 0")


def check_prop54ii(cell: Cell) -> CheckResult:
    """Radon inversion: double transform is q^(r-2) id plus the rank-one
    correction ((q^(r-2)-1)/(q-1)) (sum g) 1."""
    ctx, r = cell.ctx, cell.r
    if r < 2:
        raise ConfigError("prop54ii needs r >= 2")
    pv = build_PV(ctx, r).orbits()
    q = ctx.q
    lead = q ** (r - 2)
    coef_num = lead - 1
    rng = cell.rng_for("prop54ii")
    tested = 0
    for kind, idx, g in _candidates(pv, rng, cell.random_count):
        total = cyc_from_int(0, ctx.p)
        for v in g.values:
            total = total + v
        correction = cyc_div_int(total * coef_num, q - 1)
        doubled = radon_double(ctx, r, g)
        expected = TraceFunction(
            doubled.orbits, tuple(v * lead + correction for v in g.values)
        )
        bad = _first_diff(doubled, expected)
        if bad != -1:
            return _result(cell, "prop54ii", "fail",
                           f"{kind}[{idx}] differs at class {bad}",
                           {"kind": kind, "index": idx, "class": bad})
        # zero-sum projection doubles cleanly
        mean = cyc_div_int(total, pv.num_classes)
        g0 = TraceFunction(pv, tuple(v - mean for v in g.values))
        if radon_double(ctx, r, g0) != g0.scale(lead):
            return _result(cell, "prop54ii", "fail",
                           f"zero-sum {kind}[{idx}] is not scaled by q^(r-2)",
                           {"kind": kind, "index": idx})
        tested += 1
    return _result(cell, "prop54ii", "pass", f"{tested} functions; factor q^(r-2) = {lead}")


def check_lemma52_sign(cell: Cell) -> CheckResult:
    """Oracle comparison: the default closed form must equal the definitional
    transform; the verbatim (unsigned) printed formula is reported as matching
    the oracle either exactly or up to a global sign."""
    hs = _homspace(cell.ctx, cell.r)
    orbits = hs.hV.orbits()
    rng = cell.rng_for("lemma52_sign")
    verbatim_matches = True
    tested = 0
    for kind, idx, t in _candidates(orbits, rng, cell.random_count):
        oracle = four_hom_definitional(hs, t)
        default = four_hom(hs, t)
        bad = _first_diff(default, oracle)
        if bad != -1:
            return _result(cell, "lemma52_sign", "fail",
                           f"default convention disagrees with the oracle on "
                           f"{kind}[{idx}] at class {bad}",
                           {"kind": kind, "index": idx, "class": bad})
        verbatim = four_hom(hs, t, sign_mode="lemma52-verbatim")
        if verbatim != oracle:
            if verbatim != oracle.scale(-1):
                return _result(cell, "lemma52_sign", "fail",
                               f"verbatim formula is neither the oracle nor its "
                               f"negative on {kind}[{idx}]",
                               {"kind": kind, "index": idx})
            verbatim_matches = False
        tested += 1
    rel = "matches oracle" if verbatim_matches else "matches oracle up to global sign -1"
    return _result(cell, "lemma52_sign", "pass", f"{tested} functions; verbatim {rel}")


# ---------------------------------------------------------------------------
# suite driver

CHECKS: dict[str, Callable[[Cell], CheckResult]] = {
    "thm22": check_thm22,
    "thm31": check_thm31,
    "prop16": check_prop16,
    "lemma17": check_lemma17,
    "prop18": check_prop18,
    "thm31_kernel": check_thm31_kernel,
    "kernel_calculus": check_kernel_calculus,
    "prop54ii": check_prop54ii,
    "lemma52_sign": check_lemma52_sign,
}


def _applicable(check: str, q: int, r: int) -> bool:
    if check == "lemma17":
        return q <= 3
    if check == "thm31_kernel":
        return q <= 5 and r <= 2
    if check == "prop54ii":
        return r >= 2
    return True


@dataclass
class Report:
    grid: GridSpec
    checks: tuple[str, ...]
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(res.passed for res in self.results)

    def to_text(self, timings: bool = False) -> str:
        lines = [
            "homogeneous Fourier verification suite",
            f"seed: {self.grid.seed}",
            f"grid: q in {[p ** n for p, n in self.grid.pairs]}, r in {list(self.grid.rs)}",
            f"random functions per (check, cell): {self.grid.random_count}",
            f"checks: {', '.join(self.checks)}",
            "",
        ]
        header = f"{'check':<16} {'p':>2} {'n':>2} {'r':>2} {'q':>2}  {'status':<6} detail"
        if timings:
            header += "  time"
        lines.append(header)
        for res in self.results:
            row = (
                f"{res.check:<16} {res.p:>2} {res.n:>2} {res.r:>2} {res.q:>2}  "
                f"{res.status:<6} {res.detail}"
            )
            if timings:
                row += f"  {res.time_s:.3f}s"
            lines.append(row)
        npass = sum(1 for res in self.results if res.passed)
        lines.append("")
        lines.append(
            f"summary: {len(self.results)} checks, {npass} passed, "
            f"{len(self.results) - npass} failed"
        )
        return "\n".join(lines) + "\n"

    def to_json(self, timings: bool = False) -> str:
        doc = {
            "seed": self.grid.seed,
            "pairs": [list(pair) for pair in self.grid.pairs],
            "rs": list(self.grid.rs),
            "random_count": self.grid.random_count,
            "checks": list(self.checks),
            "passed": self.passed,
            "results": [
                {
                    "check": res.check,
                    "p": res.p,
                    "n": res.n,
                    "r": res.r,
                    "q": res.q,
                    "status": res.status,
                    "detail": res.detail,
                    "witness": res.witness,
                    **({"time_s": round(res.time_s, 6)} if timings else {}),
                }
                for res in self.results
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self, timings: bool = False) -> str:
        cols = "check,p,n,r,q,status,detail"
        if timings:
            cols += ",time_s"
        rows = [cols]
        for res in self.results:
            detail = res.detail.replace('"', "'")
            row = f'{res.check},{res.p},{res.n},{res.r},{res.q},{res.status},"{detail}"'
            if timings:
                row += f",{res.time_s:.6f}"
            rows.append(row)
        return "\n".join(rows) + "\n"


def run_suite(
    grid: GridSpec,
    checks: tuple[str, ...] | None = None,
    psi_unit: int = 1,
) -> Report:
    if checks is None:
        checks = tuple(CHECKS)
    else:
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    report = Report(grid=grid, checks=tuple(checks))
    for p, n, r in grid.cells():
        ctx = field_make(p, n, psi_unit=psi_unit)
        cell = Cell(ctx=ctx, r=r, random_count=grid.random_count, seed=grid.seed)
        for name in checks:
            if not _applicable(name, ctx.q, r):
                continue
            start = time.perf_counter()
            res = CHECKS[name](cell)
            res.time_s = time.perf_counter() - start
            report.results.append(res)
    return report
