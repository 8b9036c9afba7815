"""Numba switch.

Set ``LOOPKIT_DISABLE_NUMBA=1`` to run every kernel through its pure
Python/numpy fallback instead of the compiled path.
"""
import os

_flag = os.environ.get("LOOPKIT_DISABLE_NUMBA", "").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not DISABLED


def njit(func):
    """Compile ``func`` in nopython mode when numba is enabled."""
    if not USE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)


__all__ = ["USE_NUMBA", "njit"]
