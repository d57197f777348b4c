"""Kernel backend selection.

Imports the compiled kernel when available, otherwise the pure-Python one.
Both expose the same functions with identical draw-for-draw semantics, so
the choice affects speed only, never results.  Set ``SIGNEDPD_KERNEL=python``
or ``=c`` to force a backend (the latter fails loudly if the extension is
missing); ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

from . import _pycore

_forced = os.environ.get("SIGNEDPD_KERNEL", "").strip().lower()

if _forced == "python":
    kernel = _pycore
    BACKEND = "python"
elif _forced == "c":
    from . import _fastcore

    kernel = _fastcore
    BACKEND = "c"
else:
    if _forced:
        raise ImportError(
            f"SIGNEDPD_KERNEL={_forced!r} not recognised (use 'c' or 'python')"
        )
    try:
        from . import _fastcore
    except ImportError:
        kernel = _pycore
        BACKEND = "python"
    else:
        kernel = _fastcore
        BACKEND = "c"

DYADIC = _pycore.DYADIC
TRIADIC = _pycore.TRIADIC


def backend_name() -> str:
    """Active kernel backend: 'c' (compiled) or 'python' (fallback)."""
    return BACKEND
