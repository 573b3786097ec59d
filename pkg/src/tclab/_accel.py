"""Optional numba acceleration.

Hot kernels are written once in a numba-compatible subset of numpy and
decorated with :func:`njit`.  Setting ``TCLAB_DISABLE_NUMBA=1`` (or running
without numba installed) leaves them as plain Python functions, which is the
reference path the benchmark compares against.
"""

from __future__ import annotations

import os

__all__ = ["njit", "NUMBA_ENABLED"]


def _flag_disabled() -> bool:
    return os.environ.get("TCLAB_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_ENABLED = False

if not _flag_disabled():
    try:
        import numba as _numba

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _numba = None


def njit(func=None, **kwargs):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""

    def wrap(f):
        if NUMBA_ENABLED:
            opts = {"cache": True}
            opts.update(kwargs)
            return _numba.njit(**opts)(f)
        return f

    if func is None:
        return wrap
    return wrap(func)
