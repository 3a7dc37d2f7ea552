"""Backend selection for the enumeration kernels.

Set ``QUADBUNDLE_DISABLE_NUMBA=1`` to force the pure-numpy path even when
numba is importable.  :func:`set_backend` switches at runtime (benchmarks and
the cross-backend tests use it).
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("QUADBUNDLE_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG in {"1", "true", "yes", "on"}

try:
    if DISABLED_BY_ENV:
        raise ImportError
    import numba as _numba

    NUMBA_AVAILABLE = True
except ImportError:
    _numba = None
    NUMBA_AVAILABLE = False

_backend = "numba" if NUMBA_AVAILABLE else "numpy"


def njit(func):
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    prev = _backend
    _backend = name
    return prev
