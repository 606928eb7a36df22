"""Genetic algorithm with a feasibility-preserving greedy crossover.

Chromosomes are 0/1 vectors over the objects. The initial population is
drawn bit by bit with ``inclusion_probability`` and may be infeasible;
crossover pools both parents' objects and rebuilds a single feasible child
in utility-ratio order, after which ordinary bit-flip mutation applies.
Infeasible individuals stay in the population and are ranked below every
feasible one.

>>> from mkpga.instance import parse_weing
>>> t1 = parse_weing("3 2 6 10 12 1 2 3 2 2 2 5 5", "T1")
>>> evolve(t1, GaConfig(population_size=20, generations=50, seed=42)).best.value
22.0
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .greedy import greedy_construct
from .instance import Instance, as_selection, objective
from .multipliers import Multipliers, UtilityRatios, compute_multipliers, compute_ratios

__all__ = [
    "GaConfig",
    "GaResult",
    "Individual",
    "evolve",
    "fitness_rank",
    "greedy_crossover",
    "init_population",
    "make_individual",
    "mutate",
    "select_parent",
]


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    generations: int = 500
    inclusion_probability: float = 0.5
    #: per-bit flip probability; ``None`` means ``1 / n``
    mutation_rate: float | None = None
    tournament_size: int = 3
    elite_count: int = 2
    no_improvement_limit: int | None = 200
    seed: int = 0
    divide_by_m: bool = True
    multiplier_iterations: int = 100
    multiplier_step: float = 0.5
    #: wall-clock cap per run in seconds; ``None`` for no cap
    time_limit: float | None = None

    def __post_init__(self) -> None:
        def positive_int(name):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

        for name in ("population_size", "generations", "tournament_size",
                     "multiplier_iterations"):
            positive_int(name)
        if self.no_improvement_limit is not None:
            positive_int("no_improvement_limit")
        if not 0.0 <= self.inclusion_probability <= 1.0:
            raise ValueError(f"inclusion_probability must lie in [0, 1], got {self.inclusion_probability}")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError(f"mutation_rate must lie in [0, 1], got {self.mutation_rate}")
        if self.tournament_size < 2:
            raise ValueError(f"tournament_size must be at least 2, got {self.tournament_size}")
        if int(self.elite_count) != self.elite_count or not 0 <= self.elite_count < self.population_size:
            raise ValueError(f"elite_count must lie in [0, population_size), got {self.elite_count}")
        if not 0 <= self.seed < 2**64 or int(self.seed) != self.seed:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.multiplier_step > 0:
            raise ValueError(f"multiplier_step must be positive, got {self.multiplier_step}")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")

    def rate_for(self, n: int) -> float:
        return 1.0 / n if self.mutation_rate is None else float(self.mutation_rate)

    def replace(self, **changes) -> GaConfig:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Individual:
    """A selection with cached objective, per-constraint usage and feasibility."""

    sel: np.ndarray
    value: float
    usage: np.ndarray
    feasible: bool
    violation: float

    def __repr__(self) -> str:
        ones = np.flatnonzero(self.sel).tolist()
        return f"Individual(value={self.value:g}, feasible={self.feasible}, objects={ones})"


def _violation(instance: Instance, use: np.ndarray) -> np.ndarray:
    over = np.maximum(use - instance.capacities, 0.0)
    return (over / np.maximum(instance.capacities, 1.0)).sum(axis=-1)


def make_individual(instance: Instance, sel) -> Individual:
    bits = as_selection(instance, sel).copy()
    bits.setflags(write=False)
    use = instance.weights[:, bits].sum(axis=1)
    use.setflags(write=False)
    return Individual(bits, objective(instance, bits), use,
                      bool(np.all(use <= instance.capacities)), float(_violation(instance, use)))


def _fitness_key(ind: Individual) -> tuple:
    if ind.feasible:
        return (1, 0.0, ind.value)
    return (0, -ind.violation, ind.value)


def fitness_rank(a: Individual, b: Individual) -> int:
    """``1`` if ``a`` ranks above ``b``, ``-1`` if below, ``0`` if level.

    Feasible beats infeasible; feasibles compare by value; infeasibles by
    smaller normalised violation, then value. Callers break level pairs by
    population order.
    """
    ka, kb = _fitness_key(a), _fitness_key(b)
    return (ka > kb) - (ka < kb)


def _rank_positions(feasible: np.ndarray, values: np.ndarray, violation: np.ndarray) -> np.ndarray:
    """Position of each individual in the best-first ordering (0 = best)."""
    idx = np.arange(values.size)
    viol = np.where(feasible, 0.0, violation)
    order = np.lexsort((idx, -values, viol, ~feasible))
    pos = np.empty_like(order)
    pos[order] = idx
    return pos


def init_population(instance: Instance, config: GaConfig, rng: np.random.Generator) -> list[Individual]:
    """Random chromosomes, each bit set with ``inclusion_probability``.
    Infeasible individuals are kept."""
    bits = rng.random((config.population_size, instance.n)) < config.inclusion_probability
    return [make_individual(instance, b) for b in bits]


def select_parent(population: Sequence[Individual], config: GaConfig,
                  rng: np.random.Generator) -> Individual:
    """Tournament of ``tournament_size`` entrants drawn with replacement."""
    if not population:
        raise ValueError("empty population")
    pos = _rank_positions(np.array([p.feasible for p in population]),
                          np.array([p.value for p in population]),
                          np.array([p.violation for p in population]))
    entrants = rng.integers(0, len(population), size=config.tournament_size)
    return population[int(entrants[np.argmin(pos[entrants])])]


def greedy_crossover(instance: Instance, ratios: UtilityRatios,
                     a: Individual, b: Individual) -> Individual:
    """One feasible child built greedily from the union of both parents."""
    return make_individual(instance, greedy_construct(instance, ratios, a.sel | b.sel))


def mutate(instance: Instance, ind: Individual, config: GaConfig,
           rng: np.random.Generator) -> Individual:
    flips = rng.random(instance.n) < config.rate_for(instance.n)
    return make_individual(instance, ind.sel ^ flips)


@dataclass(frozen=True, eq=False)
class GaResult:
    best: Individual
    generation_found: int
    generations_run: int
    #: best-ever objective after initialisation and after each generation
    history: np.ndarray
    elapsed: float
    greedy_baseline: float
    upper_bound: float
    multipliers: Multipliers = field(repr=False)
    stop_reason: str = ""


class _Population:
    __slots__ = ("bits", "values", "usage", "feasible", "violation")

    def __init__(self, instance: Instance, bits: np.ndarray):
        self.bits = bits
        x = bits.astype(np.float64)
        self.values = x @ instance.values
        self.usage = x @ instance.weights.T
        self.feasible = np.all(self.usage <= instance.capacities, axis=1)
        self.violation = _violation(instance, self.usage)

    def best_feasible(self) -> int:
        """Index of the highest-value feasible individual (lowest index on ties), or -1."""
        if not self.feasible.any():
            return -1
        return int(np.argmax(np.where(self.feasible, self.values, -np.inf)))

    def ranks(self) -> np.ndarray:
        return _rank_positions(self.feasible, self.values, self.violation)


def evolve(instance: Instance, config: GaConfig | None = None) -> GaResult:
    """Run the genetic algorithm.

    Multipliers and ratios are computed once up front. The greedy solution
    replaces the first random individual so the result never falls below
    it. Each generation keeps ``elite_count`` individuals and breeds the
    rest. The run ends after ``generations``, after ``no_improvement_limit``
    stale generations, when ``time_limit`` elapses, or as soon as the best
    value reaches the known optimum or the Lagrangian upper bound.
    """
    cfg = config or GaConfig()
    t0 = time.perf_counter()
    n = instance.n
    mult = compute_multipliers(instance, cfg.multiplier_iterations, cfg.multiplier_step)
    ratios = compute_ratios(instance, mult, cfg.divide_by_m)
    order = np.ascontiguousarray(ratios.order, dtype=np.int64)
    baseline_bits = greedy_construct(instance, ratios)
    baseline = objective(instance, baseline_bits)
    upper = mult.best_bound
    # an integral objective cannot exceed floor(bound); the slack absorbs float noise in the bound
    proven = math.floor(upper + 1e-9) if instance.integral else upper

    def reached(v: float) -> str:
        if instance.known_optimum is not None and v >= instance.known_optimum:
            return "known optimum"
        if v >= proven:
            return "upper bound"
        return ""

    rng = np.random.default_rng(cfg.seed)
    rate = cfg.rate_for(n)
    size, elite = cfg.population_size, cfg.elite_count
    bits = rng.random((size, n)) < cfg.inclusion_probability
    bits[0] = baseline_bits
    pop = _Population(instance, bits)

    i = pop.best_feasible()
    best_bits, best_val = pop.bits[i].copy(), float(pop.values[i])
    found, gen, stale = 0, 0, 0
    history = [best_val]
    reason = reached(best_val)
    while not reason:
        if gen >= cfg.generations:
            reason = "generations"
            break
        if cfg.no_improvement_limit is not None and stale >= cfg.no_improvement_limit:
            reason = "no improvement"
            break
        if cfg.time_limit is not None and time.perf_counter() - t0 >= cfg.time_limit:
            reason = "time limit"
            break
        gen += 1
        pos = pop.ranks()
        keep = np.argsort(pos)[:elite]
        draws = rng.integers(0, size, size=(size - elite, 2, cfg.tournament_size))
        flips = rng.random((size - elite, n)) < rate
        children = kernels.breed(pop.bits, pos, draws, flips, order,
                                 instance.weights, instance.capacities)
        pop = _Population(instance, np.concatenate([pop.bits[keep], children]))
        i = pop.best_feasible()
        if i >= 0 and pop.values[i] > best_val:
            best_bits, best_val = pop.bits[i].copy(), float(pop.values[i])
            found, stale = gen, 0
            reason = reached(best_val)
        else:
            stale += 1
        history.append(best_val)

    hist = np.array(history)
    hist.setflags(write=False)
    return GaResult(make_individual(instance, best_bits), found, gen, hist,
                    time.perf_counter() - t0, baseline, upper, mult, reason)
