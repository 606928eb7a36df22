"""Ratio-ordered greedy construction."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels
from .instance import Instance, objective
from .multipliers import Multipliers, UtilityRatios, compute_ratios

__all__ = ["greedy_construct", "greedy_estimate"]


def greedy_construct(instance: Instance, ratios: UtilityRatios,
                     candidates: Iterable[int] | np.ndarray | None = None) -> np.ndarray:
    """Scan ``candidates`` in ratio order and keep every object that still fits.

    ``candidates`` may be a bool mask of length ``n`` or an iterable of
    object indices; ``None`` means all objects. The result is always
    feasible and a subset of the candidates.
    """
    if candidates is None:
        mask = np.ones(instance.n, dtype=np.bool_)
    else:
        if isinstance(candidates, (set, frozenset)):
            candidates = sorted(candidates)
        arr = np.asarray(candidates)
        if arr.dtype == np.bool_ and arr.shape == (instance.n,):
            mask = arr
        else:
            idx = arr.astype(np.int64).ravel()
            if idx.size and (idx.min() < 0 or idx.max() >= instance.n):
                raise IndexError(f"candidate index out of range for n={instance.n}")
            mask = np.zeros(instance.n, dtype=np.bool_)
            mask[idx] = True
    return kernels.greedy_fill(np.asarray(ratios.order, dtype=np.int64), mask[None, :],
                               instance.weights, instance.capacities)[0]


def greedy_estimate(instance: Instance, mult: Multipliers, divide_by_m: bool = True) -> float:
    """Objective of the greedy construction over all objects."""
    return objective(instance, greedy_construct(instance, compute_ratios(instance, mult, divide_by_m)))
