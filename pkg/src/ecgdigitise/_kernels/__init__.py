"""Kernel backend selection.

The compiled extension is used when present; otherwise the NumPy fallback.
Set ECGDIGITISE_PURE_PYTHON=1 to force the fallback (used by the parity
tests and the benchmark).
"""

import os

from . import pykernels

if os.environ.get("ECGDIGITISE_PURE_PYTHON"):
    _impl = pykernels
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pykernels
        BACKEND = "python"

hough_accumulate_counts = _impl.hough_accumulate_counts
rotate_bilinear = _impl.rotate_bilinear


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
