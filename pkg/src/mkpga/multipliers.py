"""Lagrangian constraint weights and the utility ratios derived from them.

Relaxing every capacity constraint with a multiplier ``l_j >= 0`` gives the
upper bound::

    L(l) = sum_j l_j c_j + sum_i max(0, v_i - sum_j l_j w_ji)

The multipliers are improved by projected subgradient descent on ``L``
with a diminishing step, keeping the iterate with the smallest bound. They
then price each constraint inside the greedy ratio::

    ratio_i = v_i / (sum_j l_j w_ji / m)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance

__all__ = [
    "EPSILON_FLOOR",
    "Multipliers",
    "UtilityRatios",
    "compute_multipliers",
    "compute_ratios",
    "init_multipliers",
    "relaxation_bound",
    "relaxed_selection",
    "update_multipliers",
]

EPSILON_FLOOR = 1e-4

# Ratios that agree to this many mantissa bits sort as ties. Exact ties
# computed along different float paths (e.g. scaled multipliers) then still
# fall back to index order instead of rounding noise.
_KEY_BITS = 32


@dataclass(frozen=True, eq=False)
class Multipliers:
    l: np.ndarray
    iterations_run: int = 0
    best_bound: float = float("inf")

    def __post_init__(self) -> None:
        lv = np.array(self.l, dtype=np.float64)
        if lv.ndim != 1 or lv.size < 1:
            raise ValueError("multipliers must be a non-empty 1-d vector")
        if not np.all(np.isfinite(lv)) or np.any(lv <= 0):
            raise ValueError("multipliers must be finite and strictly positive")
        lv.setflags(write=False)
        object.__setattr__(self, "l", lv)


@dataclass(frozen=True, eq=False)
class UtilityRatios:
    """Per-object ratios ``r`` (``inf`` for cost-free objects) and the
    greedy scan ``order``."""

    r: np.ndarray
    denominators: np.ndarray
    order: np.ndarray


def _check(instance: Instance, mult: Multipliers) -> np.ndarray:
    if mult.l.size != instance.m:
        raise ValueError(f"{mult.l.size} multipliers for m={instance.m} constraints")
    return mult.l


def _reduced_profits(instance: Instance, l: np.ndarray) -> np.ndarray:
    return instance.values - l @ instance.weights


def relaxed_selection(instance: Instance, mult: Multipliers) -> np.ndarray:
    """Maximiser of the relaxed objective; objects with zero reduced profit
    are left out."""
    return _reduced_profits(instance, _check(instance, mult)) > 0


def relaxation_bound(instance: Instance, mult: Multipliers) -> float:
    l = _check(instance, mult)
    rp = _reduced_profits(instance, l)
    return float(l @ instance.capacities + np.maximum(rp, 0.0).sum())


def init_multipliers(instance: Instance) -> Multipliers:
    unit = Multipliers(np.ones(instance.m))
    return Multipliers(unit.l, 0, relaxation_bound(instance, unit))


def update_multipliers(instance: Instance, mult: Multipliers, step: float) -> Multipliers:
    """One projected subgradient step.

    The subgradient ``usage(x*) - c`` of the relaxed maximiser ``x*`` is
    scaled by ``max(c_j, 1)`` per constraint, and every multiplier is kept
    at or above :data:`EPSILON_FLOOR`.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    l = _check(instance, mult)
    x = relaxed_selection(instance, mult)
    g = instance.weights[:, x].sum(axis=1) - instance.capacities
    new_l = np.maximum(EPSILON_FLOOR, l + step * g / np.maximum(instance.capacities, 1.0))
    bound = relaxation_bound(instance, Multipliers(new_l))
    return Multipliers(new_l, mult.iterations_run + 1, min(mult.best_bound, bound))


def compute_multipliers(instance: Instance, iterations: int = 100,
                        initial_step: float = 0.5) -> Multipliers:
    """Run ``iterations`` subgradient steps with step ``initial_step / k``.

    Returns the iterate with the smallest bound (earliest on ties), stamped
    with the total iteration count.
    """
    if iterations < 1 or int(iterations) != iterations:
        raise ValueError(f"iterations must be a positive integer, got {iterations}")
    if not initial_step > 0:
        raise ValueError(f"initial_step must be positive, got {initial_step}")
    cur = init_multipliers(instance)
    best_l, best = cur.l, cur.best_bound
    for k in range(1, int(iterations) + 1):
        cur = update_multipliers(instance, cur, initial_step / k)
        bound = relaxation_bound(instance, cur)
        if bound < best:
            best_l, best = cur.l, bound
    return Multipliers(best_l, cur.iterations_run, best)


def _sort_key(r: np.ndarray) -> np.ndarray:
    mant, exp = np.frexp(r)
    scale = float(2 ** _KEY_BITS)
    return np.ldexp(np.round(mant * scale) / scale, exp)


def compute_ratios(instance: Instance, mult: Multipliers,
                   divide_by_m: bool = True) -> UtilityRatios:
    """Multiplier-weighted profit/weight ratios and their scan order.

    The order is non-increasing in ratio with ties to the lower index.
    Objects whose weighted weight is zero come first, by descending value.
    """
    l = _check(instance, mult)
    d = l @ instance.weights
    denom = d / instance.m if divide_by_m else d
    free = d == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(free, np.inf, instance.values / np.where(free, 1.0, denom))
        # order from the undivided denominator: dividing by m cannot reorder
        key = _sort_key(np.where(free, 0.0, instance.values / np.where(free, 1.0, d)))
    idx = np.arange(instance.n)
    primary = np.where(free, -instance.values, -key)
    order = np.lexsort((idx, primary, ~free))
    for a in (r, denom, order):
        a.setflags(write=False)
    return UtilityRatios(r, denom, order)
