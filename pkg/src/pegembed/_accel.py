"""Backend switch for the compiled kernels.

Set ``PEGEMBED_DISABLE_NUMBA=1`` to force the numpy/scipy implementations,
e.g. on platforms where numba is unavailable or for debugging.
"""
import os

_FLAG = os.environ.get("PEGEMBED_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG in ("", "0", "false", "no")
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    return numba.njit(*args, **kwargs)
