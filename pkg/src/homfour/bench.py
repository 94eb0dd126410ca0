"""Timing comparison of the compiled and numpy kernel backends.

Runs each hot kernel on a realistic workload for the given (q, r) cell and
reports both backends side by side, verifying along the way that they return
identical arrays.  Used by the `homfour bench` subcommand.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from homfour import _purekernels
from homfour.gf import FieldCtx
from homfour.gspace import build_V, build_V_dual, product

try:
    from homfour import _speedups
except ImportError:
    _speedups = None


@dataclass
class BenchRow:
    name: str
    numpy_s: float
    cython_s: float | None

    @property
    def speedup(self) -> float | None:
        if self.cython_s is None or self.cython_s == 0:
            return None
        return self.numpy_s / self.cython_s


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_bench(ctx: FieldCtx, r: int, repeat: int = 3) -> list[BenchRow]:
    q = ctx.q
    prod = product(build_V_dual(ctx, r), build_V(ctx, r))
    enc, chis, m = prod.enc, prod.chis, prod.m
    mul, add = ctx.mul_table, ctx.add_table
    tr = np.array([ctx.trace(i) for i in range(q)], dtype=np.uint8)
    venc = build_V(ctx, r).enc
    rng = np.random.default_rng(7)
    T = rng.integers(-q * q, q * q, size=(len(venc), max(1, ctx.p - 1))).astype(np.int64)

    workloads = [
        ("act_all", lambda k: k.act_all(enc, chis[len(chis) // 2], mul, q, m)),
        ("min_canon", lambda k: k.min_canon(enc, chis, mul, q, m)),
        ("pair_trace", lambda k: k.pair_trace(venc, venc, r, q, mul, add, tr)),
        (
            "deligne_accum",
            lambda k: k.deligne_accum(
                T, _purekernels.pair_trace(venc, venc, r, q, mul, add, tr), ctx.p
            ),
        ),
    ]
    rows = []
    for name, work in workloads:
        ref = work(_purekernels)
        numpy_s = _time(lambda: work(_purekernels), repeat)
        cython_s = None
        if _speedups is not None:
            got = work(_speedups)
            if not np.array_equal(np.asarray(ref), np.asarray(got)):
                raise AssertionError(f"backends disagree on {name}")
            cython_s = _time(lambda: work(_speedups), repeat)
        rows.append(BenchRow(name, numpy_s, cython_s))
    return rows


def format_rows(ctx: FieldCtx, r: int, rows: list[BenchRow]) -> str:
    lines = [
        f"kernel benchmark at q={ctx.q}, r={r} "
        f"(product space of {ctx.q ** (2 * r)} points)",
        f"{'kernel':<14} {'numpy':>10} {'cython':>10} {'speedup':>8}",
    ]
    for row in rows:
        cy = f"{row.cython_s * 1e3:.2f}ms" if row.cython_s is not None else "absent"
        sp = f"{row.speedup:.1f}x" if row.speedup is not None else "-"
        lines.append(f"{row.name:<14} {row.numpy_s * 1e3:>8.2f}ms {cy:>10} {sp:>8}")
    return "\n".join(lines) + "\n"
