"""Numba availability check.

Set ``EVP_DISABLE_NUMBA=1`` in the environment to force the pure-numpy
kernels even when numba is installed.
"""

import os

ENV_FLAG = "EVP_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrapper(f):
        return f

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrapper
