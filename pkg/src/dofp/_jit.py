"""Numba detection and the env-flag kill switch.

Set ``DOFP_DISABLE_NUMBA=1`` to force the pure-numpy fallback path; the
kernels module switches its grid entry points on :data:`NUMBA_ENABLED` and
the scalar kernels simply run undecorated.
"""

import os

_DISABLED = os.environ.get("DOFP_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)

NUMBA_ENABLED = False

if not _DISABLED:
    try:
        from numba import njit as _njit  # noqa: F401
        NUMBA_ENABLED = True
    except ImportError:
        pass

if NUMBA_ENABLED:
    from numba import njit
else:
    def njit(*args, **kwargs):
        """No-op decorator with the same call signatures as numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco
