"""Genetic algorithm for the 0/1 multidimensional knapsack problem.

Lagrangian multipliers price each capacity constraint; the resulting
utility ratios order a greedy construction that also serves as the
crossover operator of the genetic algorithm.
"""

from .bench import BenchReport, emit_report, run_benchmark
from .ga import GaConfig, GaResult, Individual, evolve
from .greedy import greedy_construct, greedy_estimate
from .instance import (Instance, ParseError, is_feasible, objective, parse_orlib, parse_weing,
                       random_instance, read_instances, to_weing, usage)
from .kernels import BACKEND
from .multipliers import (Multipliers, UtilityRatios, compute_multipliers, compute_ratios,
                          init_multipliers, relaxation_bound, relaxed_selection, update_multipliers)
from .oracle import percent_gap, solve_exact

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BenchReport", "GaConfig", "GaResult", "Individual", "Instance", "Multipliers",
    "ParseError", "UtilityRatios", "compute_multipliers", "compute_ratios", "emit_report",
    "evolve", "greedy_construct", "greedy_estimate", "init_multipliers", "is_feasible",
    "objective", "parse_orlib", "parse_weing", "percent_gap", "random_instance",
    "read_instances", "relaxation_bound", "relaxed_selection", "run_benchmark", "solve_exact",
    "to_weing", "update_multipliers", "usage",
]
