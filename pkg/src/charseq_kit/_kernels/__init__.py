"""Kernel backend selection.

Imports the compiled extension when available and falls back to the pure
Python implementation otherwise.  Set CHARSEQ_KIT_FORCE_PURE=1 to force the
fallback (used by the benchmark and the bit-identity tests).
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("CHARSEQ_KIT_FORCE_PURE"):
    _impl = pure
else:
    try:
        from . import _cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

compiled = getattr(_impl, "BACKEND", "compiled") == "compiled"
BACKEND = "compiled" if compiled else "pure"

char_partial_sums = _impl.char_partial_sums
cauchy_sum = _impl.cauchy_sum
product_sum_real = _impl.product_sum_real
product_sum_complex = _impl.product_sum_complex


def get_backend(name: str):
    """Return the kernel module for an explicit backend name."""
    if name == "pure":
        return pure
    if name == "compiled":
        if not compiled:
            raise RuntimeError("compiled kernels are not available")
        return _impl
    raise ValueError(f"unknown backend {name!r}")
