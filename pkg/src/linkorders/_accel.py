"""Backend selection for the dense kernels.

numba is used when importable unless ``LINKORDERS_DISABLE_NUMBA`` is set to a
non-empty value other than ``0``; the pure-numpy path is always available.
"""
from __future__ import annotations

import os

DISABLE_ENV = "LINKORDERS_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
else:
    # the bundled TBB is too old on some systems and only produces a warning
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "workqueue"


def numba_available() -> bool:
    return numba is not None


def numba_enabled() -> bool:
    flag = os.environ.get(DISABLE_ENV, "")
    return numba is not None and flag in ("", "0")


def set_workers(n: int | None) -> None:
    """Thread count for parallel kernels; None means all cores."""
    if numba is None or n is None:
        return
    numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
