"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python and decorated
with :func:`jit`. Setting ``SCCNT_NUMBA=0`` in the environment leaves them as
plain Python functions over numpy arrays, which is slow but has no compile
step and is handy for debugging.
"""
import os

_FALSE = {"0", "false", "no", "off"}

USE_NUMBA = os.environ.get("SCCNT_NUMBA", "1").strip().lower() not in _FALSE

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn
