"""Selection between numba-compiled kernels and the pure-numpy fallback.

Set ``CORNELLQES_DISABLE_NUMBA=1`` in the environment before import to force
the numpy path (useful for debugging and for the benchmark comparison).
"""

from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

_FLAG = os.environ.get("CORNELLQES_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(func):
    """Compile ``func`` in nopython mode, or return ``None`` when numba is absent."""
    if numba is None:
        return None
    return numba.njit(cache=True)(func)
