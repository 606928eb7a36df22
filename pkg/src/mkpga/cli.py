"""Command line entry point.

Exit codes: 0 success, 1 I/O or internal failure, 2 usage or parse error,
3 refusal by the exact solver's size guard.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bench import emit_report, emit_trials, run_benchmark
from .ga import GaConfig, evolve
from .instance import ParseError, format_number, random_instance, read_instances, to_weing
from .multipliers import compute_multipliers, compute_ratios, init_multipliers
from .oracle import DEFAULT_GUARD, GuardLimitExceeded, percent_gap, solve_exact

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
FORMATS = ("weing", "orlib")

log = logging.getLogger("mkpga")


class _Fail(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _non_negative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative integer, got {text}")
    return v


def _add_input(p: argparse.ArgumentParser, many: bool = False) -> None:
    if many:
        p.add_argument("paths", nargs="+", help="instance files or directories")
    else:
        p.add_argument("path", help="instance file, or - for standard input")
        p.add_argument("format_pos", nargs="?", choices=FORMATS, metavar="FORMAT",
                       help="positional alternative to --format")
    p.add_argument("--format", choices=FORMATS, help="file layout (default weing)")


def _add_multiplier_flags(p: argparse.ArgumentParser, iters_default: int = 100) -> None:
    p.add_argument("--multiplier-iters", type=_non_negative_int, default=iters_default,
                   help="subgradient iterations (default %(default)s)")
    p.add_argument("--multiplier-step", type=float, default=0.5,
                   help="initial subgradient step (default %(default)s)")
    p.add_argument("--no-divide-by-m", dest="divide_by_m", action="store_false",
                   help="skip dividing the weighted weight by m")


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    d = GaConfig()
    g = p.add_argument_group("genetic algorithm")
    g.add_argument("--population-size", type=_positive_int, default=d.population_size)
    g.add_argument("--generations", type=_positive_int, default=d.generations)
    g.add_argument("--inclusion-probability", type=float, default=d.inclusion_probability)
    g.add_argument("--mutation-rate", type=float, default=None, help="per-bit flip rate (default 1/n)")
    g.add_argument("--tournament-size", type=_positive_int, default=d.tournament_size)
    g.add_argument("--elite-count", type=_non_negative_int, default=d.elite_count)
    g.add_argument("--no-improvement-limit", type=_non_negative_int, default=d.no_improvement_limit,
                   help="stale generations before stopping; 0 disables (default %(default)s)")
    g.add_argument("--seed", type=_non_negative_int, default=d.seed)
    g.add_argument("--time-limit", type=float, default=None, help="seconds per run")
    g.add_argument("--print-config", action="store_true",
                   help="print the effective configuration as JSON first")
    _add_multiplier_flags(g)


def _config(args) -> GaConfig:
    if args.multiplier_iters < 1:
        raise _Fail("--multiplier-iters must be at least 1 for the genetic algorithm", EXIT_USAGE)
    try:
        return GaConfig(population_size=args.population_size, generations=args.generations,
                        inclusion_probability=args.inclusion_probability,
                        mutation_rate=args.mutation_rate, tournament_size=args.tournament_size,
                        elite_count=args.elite_count,
                        no_improvement_limit=args.no_improvement_limit or None,
                        seed=args.seed, divide_by_m=args.divide_by_m,
                        multiplier_iterations=args.multiplier_iters,
                        multiplier_step=args.multiplier_step, time_limit=args.time_limit)
    except ValueError as exc:
        raise _Fail(f"invalid configuration: {exc}", EXIT_USAGE) from None


def _load(path, fmt):
    try:
        return read_instances(path, fmt)
    except ParseError as exc:
        raise _Fail(f"{path}: parse error: {exc}", EXIT_USAGE) from None
    except ValueError as exc:
        raise _Fail(f"{path}: invalid instance: {exc}", EXIT_USAGE) from None
    except OSError as exc:
        raise _Fail(f"{path}: cannot read: {exc.strerror or exc}", EXIT_FAIL) from None


def _fmt(args) -> str:
    return args.format or getattr(args, "format_pos", None) or "weing"


def _objects(sel) -> str:
    return " ".join(map(str, np.flatnonzero(sel))) or "-"


def cmd_solve(args) -> int:
    instances = _load(args.path, _fmt(args))
    cfg = _config(args)
    if args.print_config:
        print(json.dumps(dataclasses.asdict(cfg), sort_keys=True))
    for inst in instances:
        res = evolve(inst, cfg)
        best = res.best.value
        print(f"instance={inst.name} n={inst.n} m={inst.m}")
        print(f"best={format_number(best)}")
        if inst.known_optimum is not None:
            print(f"known_optimum={format_number(inst.known_optimum)}")
            print(f"gap={format_number(round(percent_gap(best, inst.known_optimum), 6))}%")
        else:
            print(f"upper_bound={format_number(round(res.upper_bound, 6))}")
            print(f"gap_vs_bound={format_number(round(percent_gap(best, res.upper_bound), 6))}%")
        print(f"greedy_baseline={format_number(res.greedy_baseline)}")
        print(f"generation_found={res.generation_found}")
        print(f"generations_run={res.generations_run}")
        print(f"elapsed={res.elapsed:.3f}s")
        print(f"selected={_objects(res.best.sel)}")
    return EXIT_OK


def _expand(paths) -> list[Path]:
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(f for f in p.iterdir() if f.is_file() and not f.name.startswith(".")))
        else:
            out.append(p)
    return out


def cmd_bench(args) -> int:
    cfg = _config(args)
    instances = []
    for path in _expand(args.paths):
        try:
            instances.extend(_load(path, _fmt(args)))
        except _Fail as exc:
            print(f"warning: skipping {exc}", file=sys.stderr)
    if not instances:
        raise _Fail("no valid instances to benchmark", EXIT_USAGE)
    if args.print_config:
        print(json.dumps(dataclasses.asdict(cfg), sort_keys=True))
    report = run_benchmark(instances, cfg, args.trials, args.workers)
    fmt = args.report_format
    if fmt is None:
        fmt = "csv" if args.output and args.output.endswith(".csv") else "table"
    text = emit_report(report, fmt)
    try:
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        if args.trials_output:
            Path(args.trials_output).write_text(emit_trials(report))
    except OSError as exc:
        raise _Fail(f"cannot write report: {exc}", EXIT_FAIL) from None
    return EXIT_OK


def cmd_oracle(args) -> int:
    for inst in _load(args.path, _fmt(args)):
        try:
            value, sel = solve_exact(inst, guard=args.guard, force=args.force)
        except GuardLimitExceeded as exc:
            raise _Fail(f"{inst.name}: {exc} (use --force)", EXIT_GUARD) from None
        print(f"instance={inst.name} n={inst.n} m={inst.m}")
        print(f"optimum={format_number(value)}")
        print(f"selected={_objects(sel)}")
    return EXIT_OK


def cmd_ratios(args) -> int:
    for inst in _load(args.path, _fmt(args)):
        if args.multiplier_iters == 0:
            mult = init_multipliers(inst)
        else:
            mult = compute_multipliers(inst, args.multiplier_iters, args.multiplier_step)
        ratios = compute_ratios(inst, mult, args.divide_by_m)
        rank = np.empty(inst.n, dtype=np.int64)
        rank[ratios.order] = np.arange(1, inst.n + 1)
        print(f"instance={inst.name} n={inst.n} m={inst.m}")
        print("multipliers=" + " ".join(format_number(round(x, 9)) for x in mult.l))
        print(f"best_bound={format_number(round(mult.best_bound, 9))}")
        print(f"{'object':>6}  {'value':>12}  {'denominator':>14}  {'ratio':>14}  {'rank':>5}")
        for i in range(inst.n):
            r = ratios.r[i]
            shown = "inf" if np.isinf(r) else format_number(round(r, 9))
            print(f"{i:>6}  {format_number(inst.values[i]):>12}  "
                  f"{format_number(round(ratios.denominators[i], 9)):>14}  {shown:>14}  {rank[i]:>5}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if not 0 < args.tightness <= 1:
        raise _Fail(f"--tightness must lie in (0, 1], got {args.tightness}", EXIT_USAGE)
    sys.stdout.write(to_weing(random_instance(args.n, args.m, args.seed, args.tightness)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkpga", description="Genetic algorithm for the 0/1 multidimensional knapsack problem.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the genetic algorithm on an instance file")
    _add_input(p)
    _add_ga_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="repeated trials with a solve-rate and gap report")
    _add_input(p, many=True)
    _add_ga_flags(p)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--workers", type=_positive_int, default=1, help="concurrent trials")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--report-format", choices=("table", "csv"),
                   help="default csv when --output ends in .csv, else table")
    p.add_argument("--trials-output", help="also write per-trial csv here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exact optimum by branch and bound")
    _add_input(p)
    p.add_argument("--force", action="store_true", help="run even above the size guard")
    p.add_argument("--guard", type=_positive_int, default=DEFAULT_GUARD,
                   help="largest n solved without --force (default %(default)s)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ratios", aliases=["debug"], help="print multipliers and utility ratios")
    _add_input(p)
    _add_multiplier_flags(p)
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("gen", help="emit a random instance in weing layout")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--seed", type=_non_negative_int, default=0)
    p.add_argument("--tightness", type=float, default=0.5)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
