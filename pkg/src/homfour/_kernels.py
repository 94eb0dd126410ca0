"""Backend selector for the point-level kernels.

Prefers the compiled extension (homfour._speedups) and falls back to the
numpy implementations in homfour._purekernels when the extension is absent
or when HOMFOUR_PURE=1 is set in the environment.  Exposes BACKEND with the
name of the active implementation.
"""

from __future__ import annotations

import os

if os.environ.get("HOMFOUR_PURE") == "1":
    from homfour._purekernels import (
        BACKEND,
        act_all,
        deligne_accum,
        equiv_violation,
        find_missing,
        min_canon,
        pair_trace,
    )
else:
    try:
        from homfour._speedups import (
            BACKEND,
            act_all,
            deligne_accum,
            equiv_violation,
            find_missing,
            min_canon,
            pair_trace,
        )
    except ImportError:
        from homfour._purekernels import (
            BACKEND,
            act_all,
            deligne_accum,
            equiv_violation,
            find_missing,
            min_canon,
            pair_trace,
        )

__all__ = [
    "BACKEND",
    "act_all",
    "min_canon",
    "find_missing",
    "equiv_violation",
    "pair_trace",
    "deligne_accum",
]
