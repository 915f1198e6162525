"""Kernel selection.

The compiled extension is used when it imports; setting
``POLYGAMY_LAB_BACKEND=python`` forces the NumPy fallback.
"""

from __future__ import annotations

import os

from . import _search_py

try:
    from . import _search_ext
except ImportError:  # extension not built
    _search_ext = None

KERNELS = {"python": _search_py}
if _search_ext is not None:
    KERNELS["cython"] = _search_ext

if os.environ.get("POLYGAMY_LAB_BACKEND", "").lower() == "python" or _search_ext is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def get_kernel(name: str | None = None):
    name = name or BACKEND
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available (have {sorted(KERNELS)})") from None


def worker_count() -> int:
    """Worker cap from ``POLYGAMY_LAB_THREADS`` (default: CPU count)."""
    raw = os.environ.get("POLYGAMY_LAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
