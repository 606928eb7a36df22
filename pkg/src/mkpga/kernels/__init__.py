"""Hot loops with a numba backend and a pure numpy fallback.

The numba backend is used when numba imports cleanly, unless the
``MKPGA_DISABLE_NUMBA`` environment variable is set to a true value
(``1``, ``true``, ``yes``, ``on``). Both backends agree bit for bit.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import numpy_kernels

__all__ = ["BACKEND", "breed", "exact_dfs", "get_backend", "greedy_fill"]

_TRUE = {"1", "true", "yes", "on"}


def get_backend(name: str) -> ModuleType:
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name == "numpy":
        return numpy_kernels
    if name == "numba":
        from . import numba_kernels
        return numba_kernels
    raise ValueError(f"unknown backend {name!r}")


def _select() -> tuple[str, ModuleType]:
    if os.environ.get("MKPGA_DISABLE_NUMBA", "").strip().lower() in _TRUE:
        return "numpy", numpy_kernels
    try:
        return "numba", get_backend("numba")
    except ImportError:
        return "numpy", numpy_kernels


BACKEND, _impl = _select()

greedy_fill = _impl.greedy_fill
breed = _impl.breed
exact_dfs = _impl.exact_dfs
