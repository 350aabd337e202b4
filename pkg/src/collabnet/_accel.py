"""Optional numba acceleration.

Kernels are written once as plain Python over numpy arrays.  When numba is
importable and ``COLLABNET_DISABLE_NUMBA`` is unset (or ``0``), the
dispatchers in :mod:`collabnet.kernels` route to ``njit``-compiled copies;
otherwise the pure numpy / interpreted versions run.
"""

import os

DISABLE_ENV = "COLLABNET_DISABLE_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

HAVE_NUMBA = _numba is not None


def _env_disabled():
    value = os.environ.get(DISABLE_ENV, "").strip().lower()
    return value not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def maybe_njit(func):
    """Return an njit-compiled copy of ``func`` (or ``func`` itself without numba).

    The original function stays importable, so both paths can be compared in
    one process regardless of the env flag.
    """
    if not HAVE_NUMBA:
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend_name(use_numba=None):
    if use_numba is None:
        use_numba = USE_NUMBA
    return "numba" if (use_numba and HAVE_NUMBA) else "numpy"


def jit_nocache(func):
    """njit without on-disk caching (closures cannot be cached)."""
    if not HAVE_NUMBA:
        return func
    return _numba.njit(nogil=True)(func)
