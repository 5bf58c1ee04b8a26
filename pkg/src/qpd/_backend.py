"""Kernel backend selection.

The compiled extension is used when it imports; ``QPD_PURE_PYTHON=1`` forces
the numpy fallback. ``QPD_THREADS`` caps the worker threads of parallel kernels.
"""

from __future__ import annotations

import os

from qpd import _fallback

KERNELS = _fallback
BACKEND = "python"

if not os.environ.get("QPD_PURE_PYTHON"):
    try:
        from qpd import _kernels as KERNELS  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        pass


def threads() -> int:
    raw = os.environ.get("QPD_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return max(1, min(8, os.cpu_count() or 1))


def kernels(pure: bool = False):
    """The active kernel module, or the fallback when ``pure`` is set."""
    return _fallback if pure else KERNELS
