"""Exact optimum for small instances and gap arithmetic."""

from __future__ import annotations

import warnings

import numpy as np

from . import kernels
from .instance import Instance
from .multipliers import compute_ratios, init_multipliers

__all__ = ["DEFAULT_GUARD", "GuardLimitExceeded", "percent_gap", "solve_exact"]

DEFAULT_GUARD = 30


class GuardLimitExceeded(RuntimeError):
    """Raised when an exact solve is requested above the size guard."""


def solve_exact(instance: Instance, guard: int = DEFAULT_GUARD,
                force: bool = False) -> tuple[float, np.ndarray]:
    """Provably optimal ``(value, selection)`` by depth-first branch and bound.

    Objects are branched on in unit-multiplier ratio order; a node is cut
    when its value plus every remaining object's value cannot beat the
    incumbent. Refuses ``n > guard`` unless ``force`` is set.
    """
    if instance.n > guard:
        if not force:
            raise GuardLimitExceeded(
                f"n={instance.n} exceeds the exact-solver guard of {guard}; "
                f"pass force=True to run anyway")
        warnings.warn(f"exact solve forced on n={instance.n} > {guard}; "
                      f"runtime may be exponential", RuntimeWarning, stacklevel=2)
    order = compute_ratios(instance, init_multipliers(instance)).order
    best, bits = kernels.exact_dfs(instance.values, instance.weights, instance.capacities,
                                   np.asarray(order, dtype=np.int64))
    return float(best), np.asarray(bits, dtype=np.bool_)


def percent_gap(best: float, reference: float) -> float:
    """``100 * (reference - best) / reference``.

    ``best > reference`` means a bound or optimum is wrong somewhere; it is
    reported as an error, never clamped to zero.
    """
    if not reference > 0:
        raise ValueError(f"gap reference must be positive, got {reference}")
    if best > reference:
        raise ValueError(f"best value {best} exceeds reference {reference}: "
                         f"inconsistent optimum or bound")
    return 100.0 * (reference - best) / reference
