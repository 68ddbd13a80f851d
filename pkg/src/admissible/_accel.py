"""Optional numba acceleration.

Set ``ADMISSIBLE_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once, at import time.
"""

import os

DISABLE_ENV = "ADMISSIBLE_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None
NUMBA_DISABLED = os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAS_NUMBA and not NUMBA_DISABLED


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True)(func)
