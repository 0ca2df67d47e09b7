"""Kernel backend selection.

The compiled Cython core is preferred; the pure-Python twin is the fallback.
Set SYMPJET_PURE=1 to force the pure backend (used by the benchmark and the
backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _jetcore_py

if os.environ.get("SYMPJET_PURE"):
    _impl = _jetcore_py
    BACKEND = "pure"
else:
    try:
        from . import _jetcore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _jetcore_py
        BACKEND = "pure"

mul_trunc = _impl.mul_trunc
iadd_scaled = _impl.iadd_scaled
scale = _impl.scale

__all__ = ["BACKEND", "mul_trunc", "iadd_scaled", "scale"]
