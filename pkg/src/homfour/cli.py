"""Command-line interface: verification suite, one-off transforms, tables.

Subcommands:
    verify      run the theorem-shadow suite over a parameter grid
    transform   apply a transform to a function file (JSON in, JSON out)
    table       print the small auditable tables (psi, projective points, ...)
    bench       time the hot kernels on both backends and the transforms

Exit codes: 0 success / all checks pass, 1 at least one check failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from contextlib import contextmanager
from typing import Sequence

from homfour.errors import ConfigError
from homfour.gf import field_make
from homfour.gspace import build_PV, incidence, projective_points
from homfour.tracefn import (
    builtin_Psi,
    builtin_Psi_prime,
    dump_function,
    load_function,
)
from homfour.transforms import (
    SIGN_MODES,
    HomSpace,
    four_deligne,
    four_hom,
    four_hom_dual,
    radon,
)
from homfour.verify import CHECKS, DEFAULT_PAIRS, DEFAULT_RS, GridSpec, run_suite

_FORMATS = ("text", "json", "csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homfour",
        description="Exact homogeneous Fourier transform engine over F_q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run the verification suite")
    ver.add_argument("--p", type=int, help="single characteristic (use with --n, --r)")
    ver.add_argument("--n", type=int, help="single extension degree (requires --p)")
    ver.add_argument("--r", type=int, help="single rank")
    ver.add_argument("--pmax", type=int, help="keep default grid cells with p <= pmax")
    ver.add_argument("--nmax", type=int, help="keep default grid cells with n <= nmax")
    ver.add_argument("--rmax", type=int, help="keep default ranks r <= rmax")
    ver.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECKS)}")
    ver.add_argument("--seed", type=int, default=1, help="suite seed (default 1)")
    ver.add_argument(
        "--random-count",
        type=int,
        default=100,
        help="random functions per (check, cell) (default 100)",
    )
    ver.add_argument("--format", choices=_FORMATS, default="text")
    ver.add_argument("--out", dest="outfile", help="write the report here instead of stdout")
    ver.add_argument("--timings", action="store_true", help="include per-check timings")
    ver.add_argument("--psi-unit", type=int, default=1, help="unit twisting the additive character")
    ver.add_argument("--size-bound", type=int, help="override the q^r point bound")
    ver.set_defaults(func=cmd_verify)

    tra = sub.add_parser("transform", help="apply a transform to a function file")
    tra.add_argument("op", choices=("four_hom", "four_deligne", "radon"))
    tra.add_argument("--in", dest="infile", required=True, help="input function file")
    tra.add_argument("--out", dest="outfile", help="output path (default stdout)")
    tra.add_argument("--sign-mode", choices=SIGN_MODES, default="default")
    tra.add_argument("--psi-unit", type=int, default=1)
    tra.add_argument("--size-bound", type=int)
    tra.set_defaults(func=cmd_transform)

    tab = sub.add_parser("table", help="print kernel tables and point lists")
    tab.add_argument("which", choices=("psi", "psiprime", "pv", "incidence"))
    tab.add_argument("--p", type=int, required=True)
    tab.add_argument("--n", type=int, default=1)
    tab.add_argument("--r", type=int, help="rank (required for pv and incidence)")
    tab.add_argument("--psi-unit", type=int, default=1)
    tab.add_argument("--size-bound", type=int)
    tab.set_defaults(func=cmd_table)

    ben = sub.add_parser("bench", help="time kernels on both backends, then transforms")
    ben.add_argument("--p", type=int, default=5)
    ben.add_argument("--n", type=int, default=1)
    ben.add_argument("--r", type=int, default=3)
    ben.add_argument("--repeat", type=int, default=3, help="timing repetitions (best kept)")
    ben.add_argument("--size-bound", type=int)
    ben.set_defaults(func=cmd_bench)

    return parser


@contextmanager
def _size_bound_env(value: int | None):
    """Route --size-bound through the env var every space builder reads."""
    if value is None:
        yield
        return
    if value < 1:
        raise ConfigError(f"size bound must be positive, got {value}")
    old = os.environ.get("HOMFOUR_SIZE_BOUND")
    os.environ["HOMFOUR_SIZE_BOUND"] = str(value)
    try:
        yield
    finally:
        if old is None:
            del os.environ["HOMFOUR_SIZE_BOUND"]
        else:
            os.environ["HOMFOUR_SIZE_BOUND"] = old


def _verify_grid(args) -> GridSpec:
    single = [name for name in ("p", "n", "r") if getattr(args, name) is not None]
    ranged = [name for name in ("pmax", "nmax", "rmax") if getattr(args, name) is not None]
    for name in single:
        if f"{name}max" in ranged:
            raise ConfigError(f"--{name} conflicts with --{name}max")
    if args.n is not None and args.p is None:
        raise ConfigError("--n requires --p")

    if args.p is not None:
        pairs = ((args.p, args.n if args.n is not None else 1),)
    else:
        pairs = tuple(
            (p, n)
            for p, n in DEFAULT_PAIRS
            if (args.pmax is None or p <= args.pmax)
            and (args.nmax is None or n <= args.nmax)
        )
    if args.r is not None:
        rs = (args.r,)
    else:
        rs = tuple(r for r in DEFAULT_RS if args.rmax is None or r <= args.rmax)
    return GridSpec(pairs=pairs, rs=rs, random_count=args.random_count, seed=args.seed)


def cmd_verify(args) -> int:
    with _size_bound_env(args.size_bound):
        grid = _verify_grid(args)
        checks = tuple(s for s in args.checks.split(",") if s) if args.checks else None
        report = run_suite(grid, checks=checks, psi_unit=args.psi_unit)
    render = {"text": report.to_text, "json": report.to_json, "csv": report.to_csv}
    text = render[args.format](timings=args.timings)
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


_TRANSFORM_DIRECTIONS = {
    "four_hom": {"hV": "hVdual", "hVdual": "hV"},
    "four_deligne": {"V": "V"},
    "radon": {"PV": "PVdual", "PVdual": "PV"},
}


def cmd_transform(args) -> int:
    with _size_bound_env(args.size_bound):
        t, tag, r = load_function(args.infile, psi_unit=args.psi_unit)
        directions = _TRANSFORM_DIRECTIONS[args.op]
        if tag not in directions:
            raise ConfigError(
                f"{args.op} expects a function on one of "
                f"{sorted(directions)}, got space {tag!r}"
            )
        ctx = t.orbits.ctx
        if args.op == "four_hom":
            hs = HomSpace(ctx, r)
            if tag == "hV":
                out = four_hom(hs, t, sign_mode=args.sign_mode)
            else:
                out = four_hom_dual(hs, t, sign_mode=args.sign_mode)
        elif args.op == "four_deligne":
            out = four_deligne(ctx, r, t)
        else:
            out = radon(ctx, r, t, dual=(tag == "PVdual"))
        text = dump_function(out, directions[tag], r, args.outfile)
    if not args.outfile:
        sys.stdout.write(text + "\n")
    return 0


def cmd_table(args) -> int:
    with _size_bound_env(args.size_bound):
        ctx = field_make(args.p, args.n, psi_unit=args.psi_unit)
        if args.which in ("psi", "psiprime"):
            table = builtin_Psi(ctx) if args.which == "psi" else builtin_Psi_prime(ctx)
            closed, open_ = table.values
            print(f"open:{open_}, closed:{closed}")
            return 0
        if args.r is None:
            raise ConfigError(f"table {args.which} requires --r")
        if args.which == "pv":
            build_PV(ctx, args.r)
            for rep in projective_points(ctx, args.r):
                print(str(tuple(rep)))
            return 0
        build_PV(ctx, args.r)
        reps = projective_points(ctx, args.r)
        pairs = sorted(incidence(ctx, args.r))
        for wi, vi in pairs:
            print(f"w={tuple(reps[wi])} v={tuple(reps[vi])}")
        print(f"{len(pairs)} pairs")
        return 0


def cmd_bench(args) -> int:
    from homfour._kernels import BACKEND
    from homfour.bench import format_rows, run_bench
    from homfour.tracefn import TraceFunction
    from homfour.transforms import four_hom_definitional, rho_pullback
    from homfour.verify import XorShift64Star, random_function

    with _size_bound_env(args.size_bound):
        ctx = field_make(args.p, args.n)
        print(f"active kernel backend: {BACKEND}")
        rows = run_bench(ctx, args.r, repeat=max(1, args.repeat))
        print(format_rows(ctx, args.r, rows), end="")

        hs = HomSpace(ctx, args.r)
        t = random_function(hs.hV.orbits(), XorShift64Star(1))
        g = random_function(build_PV(ctx, args.r).orbits(), XorShift64Star(2))
        jobs: list[tuple[str, object]] = [
            ("four_hom", lambda: four_hom(hs, t)),
            ("four_hom_definitional", lambda: four_hom_definitional(hs, t)),
            ("four_deligne", lambda: four_deligne(ctx, args.r, rho_pullback(hs, t))),
            ("radon", lambda: radon(ctx, args.r, g)),
        ]
        print(f"transforms at q={ctx.q}, r={args.r} (one random function)")
        for name, job in jobs:
            best = float("inf")
            result = None
            for _ in range(max(1, args.repeat)):
                start = time.perf_counter()
                result = job()
                best = min(best, time.perf_counter() - start)
            assert isinstance(result, TraceFunction)
            print(f"{name:<22} {best * 1e3:>8.2f}ms")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
