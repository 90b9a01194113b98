"""Numba switch.

Set ``WEYLKIN_DISABLE_NUMBA=1`` to force the pure-numpy kernels; the numba
path is also skipped when numba cannot be imported.
"""

import os

_DISABLED = os.environ.get("WEYLKIN_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

try:
    if _DISABLED:
        raise ImportError("numba disabled by WEYLKIN_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(func=None, **opts):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if not HAVE_NUMBA:
        return func if func is not None else (lambda f: f)
    opts.setdefault("cache", True)
    if func is None:
        return numba.njit(**opts)
    return numba.njit(func, **opts)
