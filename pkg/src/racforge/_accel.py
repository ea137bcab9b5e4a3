"""Backend selection for the hot kernels.

Every kernel has a numba implementation and a pure-numpy implementation with
identical results.  Numba is used when it imports and the environment
variable ``RACFORGE_DISABLE_NUMBA`` is unset (or ``0``); otherwise the numpy
path runs.  :func:`set_backend` switches at runtime, which the benchmark and
the backend-equivalence tests rely on.
"""
from __future__ import annotations

import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("RACFORGE_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

_backend = "numba" if (HAVE_NUMBA and not _DISABLED) else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


def use_numba() -> bool:
    return _backend == "numba"
