"""Acceptance criteria, one test each.

Every test records a one-line verdict that pytest prints in an
"acceptance criteria" section at the end of the run.

Criterion 4 (and the strict half of criterion 5) needs the public benchmark
instances Sento2, Weish05, Weing1 and Weing7 as weing-layout files with the
known optimum as trailing token. They are looked up in the directory named
by ``MKPGA_BENCH_DIR`` (default ``tests/data/benchmarks``), one file per
instance whose stem matches the instance name case-insensitively.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest

from mkpga.bench import emit_report, parse_report_csv, run_benchmark
from mkpga.ga import GaConfig, evolve, greedy_crossover, make_individual
from mkpga.greedy import greedy_estimate
from mkpga.instance import ParseError, parse_orlib, parse_weing, random_instance
from mkpga.multipliers import (Multipliers, compute_multipliers, compute_ratios,
                               init_multipliers, relaxation_bound)
from mkpga.oracle import percent_gap, solve_exact

from conftest import ORLIB_T1, WEING_T1, record

BENCH_DIR = Path(os.environ.get("MKPGA_BENCH_DIR", Path(__file__).parent / "data" / "benchmarks"))

# name -> (m, n, minimum solved out of 20); the Weing7 row is judged on gap instead
REFERENCE_SET = {
    "sento2": (30, 60, 15),
    "weish05": (5, 30, 18),
    "weing1": (2, 28, 8),
    "weing7": (2, 105, None),
}
WEING7_GAP = 0.5
WEING7_TRIAL_CAP = 60.0
SUITE_BUDGET = 15 * 60.0


def _find_benchmarks():
    found, missing = {}, []
    files = {p.stem.lower(): p for p in BENCH_DIR.glob("*") if p.is_file()} if BENCH_DIR.is_dir() else {}
    for name in REFERENCE_SET:
        if name in files:
            found[name] = parse_weing(files[name].read_text(), name)
        else:
            missing.append(name)
    return found, missing


@pytest.fixture(scope="module")
def desk_suite():
    """100 generated instances (n in [8, 16], m in [2, 5], tightness 0.5)
    with their exact optima."""
    rng = np.random.default_rng(20240601)
    out = []
    for k in range(100):
        n, m = int(rng.integers(8, 17)), int(rng.integers(2, 6))
        inst = random_instance(n, m, int(rng.integers(2**63)), 0.5, name=f"desk-{k:03d}")
        out.append((inst, solve_exact(inst)[0]))
    return out


def test_criterion_1_offspring_feasibility():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    done = infeasible = 0
    while done < 10_000:
        inst = random_instance(int(rng.integers(5, 61)), int(rng.integers(2, 11)), rng, 0.5)
        ratios = compute_ratios(inst, compute_multipliers(inst, 100, 0.5))
        for _ in range(50):
            a = make_individual(inst, rng.random(inst.n) < rng.random())
            b = make_individual(inst, rng.random(inst.n) < rng.random())
            child = greedy_crossover(inst, ratios, a, b)
            use = inst.weights[:, child.sel].sum(axis=1)
            infeasible += not (child.feasible and np.all(use <= inst.capacities))
            done += 1
    elapsed = time.perf_counter() - t0
    ok = infeasible == 0 and elapsed < 10
    record(1, ok, f"{infeasible} infeasible of {done} offspring in {elapsed:.2f} s (limit 10 s)")
    assert infeasible == 0
    assert elapsed < 10


def test_criterion_2_oracle_equivalence(desk_suite):
    cfg = GaConfig(population_size=100, generations=200)
    t0 = time.perf_counter()
    matched, above, below = 0, [], []
    for inst, opt in desk_suite:
        res = evolve(inst, cfg)
        greedy = greedy_estimate(inst, compute_multipliers(inst, cfg.multiplier_iterations,
                                                           cfg.multiplier_step))
        matched += res.best.value == opt
        if res.best.value > opt:
            above.append(inst.name)
        if res.best.value < greedy:
            below.append(inst.name)
    elapsed = time.perf_counter() - t0
    ok = matched >= 95 and not above and not below and elapsed < 60
    record(2, ok, f"{matched}/100 match the exact optimum (need 95), {len(above)} above optimum, "
                  f"{len(below)} below greedy, {elapsed:.1f} s (limit 60 s)")
    assert matched >= 95
    assert not above and not below
    assert elapsed < 60


def test_criterion_3_dual_bound_validity(desk_suite):
    violations = checked = 0
    for inst, opt in desk_suite:
        for iters in (1, 10, 100):
            mult = compute_multipliers(inst, iters)
            for bound in (relaxation_bound(inst, mult), mult.best_bound):
                violations += bound < opt
                checked += 1
    record(3, violations == 0, f"{violations} bound violations in {checked} checks")
    assert violations == 0


def test_criterion_4_reference_benchmarks():
    found, missing = _find_benchmarks()
    if missing:
        record(4, False, f"benchmark files missing from {BENCH_DIR}: {', '.join(missing)}")
        pytest.fail(f"criterion 4 needs the public benchmark instances {missing} in weing layout "
                    f"under {BENCH_DIR} (or MKPGA_BENCH_DIR); they are not available here")
    t0 = time.perf_counter()
    problems, summary = [], []
    for name, (m, n, need) in REFERENCE_SET.items():
        inst = found[name]
        if (inst.m, inst.n) != (m, n) or inst.known_optimum is None:
            problems.append(f"{name}: expected m={m}, n={n} with a known optimum")
            continue
        cfg = GaConfig(time_limit=WEING7_TRIAL_CAP) if need is None else GaConfig()
        (row,) = run_benchmark([inst], cfg, trials=20).rows
        if row.error:
            problems.append(f"{name}: {row.error}")
            continue
        gap = percent_gap(row.best_value, inst.known_optimum)
        summary.append(f"{name} {row.solved}/20 gap {gap:.3g}%")
        if need is None:
            if gap > WEING7_GAP:
                problems.append(f"{name}: best-of-20 gap {gap:.3f}% > {WEING7_GAP}%")
        elif row.solved < need or gap != 0:
            problems.append(f"{name}: solved {row.solved}/20 (need {need}), gap {gap:.3g}%")
    elapsed = time.perf_counter() - t0
    if elapsed >= SUITE_BUDGET:
        problems.append(f"suite took {elapsed:.0f} s")
    record(4, not problems, "; ".join(summary + problems) + f"; {elapsed:.0f} s")
    assert not problems


def test_criterion_5_greedy_dominance(desk_suite):
    found, missing = _find_benchmarks()
    rng = np.random.default_rng(5)
    pool = [inst for inst, _ in desk_suite[:20]]
    pool += [random_instance(int(rng.integers(30, 106)), int(rng.integers(2, 31)), rng)
             for _ in range(20)]
    pool += list(found.values())
    below, strict_reference = [], []
    for inst in pool:
        res = evolve(inst, GaConfig(time_limit=WEING7_TRIAL_CAP))
        if res.best.value < res.greedy_baseline:
            below.append(inst.name)
        if inst.name in found and res.best.value > res.greedy_baseline:
            strict_reference.append(inst.name)
    detail = f"{len(pool) - len(below)}/{len(pool)} runs at or above greedy"
    if missing:
        detail += f"; strict improvement unverifiable, reference files missing: {', '.join(missing)}"
    else:
        detail += f"; strict improvement on {strict_reference or 'no'} reference instance(s)"
    ok = not below and bool(strict_reference)
    record(5, ok, detail)
    assert not below
    assert strict_reference, detail


def test_criterion_6_determinism_and_workers(t1):
    insts = [t1] + [random_instance(int(n), int(m), s) for s, (n, m) in
                    enumerate([(20, 3), (35, 5), (50, 2), (60, 10)])]
    cfg = GaConfig(population_size=50, generations=100, seed=1234)

    def csv_without_times(workers):
        text = emit_report(run_benchmark(insts, cfg, trials=6, workers=workers), "csv")
        return [{k: v for k, v in r.items() if k != "mean_seconds"} for r in parse_report_csv(text)]

    first, second, eight = csv_without_times(1), csv_without_times(1), csv_without_times(8)
    ok = first == second == eight
    record(6, ok, f"{len(first)} rows identical across repeat run and workers 1 vs 8" if ok
           else "csv differs between runs")
    assert first == second
    assert first == eight


def test_criterion_7_ratio_reduction():
    rng = np.random.default_rng(7)
    exact_fail = order_fail = 0
    for _ in range(1000):
        inst = random_instance(int(rng.integers(1, 60)), 1, rng)
        r = compute_ratios(inst, init_multipliers(inst))
        exact_fail += not np.array_equal(r.r, inst.values / inst.weights[0])
    for _ in range(1000):
        inst = random_instance(int(rng.integers(1, 60)), int(rng.integers(1, 11)), rng)
        for mult in (init_multipliers(inst), Multipliers(rng.uniform(1e-4, 5, inst.m))):
            base = compute_ratios(inst, mult).order
            variants = [compute_ratios(inst, mult, divide_by_m=False).order]
            for scale in (0.1, 0.5, 3.7, 1e3, float(rng.uniform(1e-3, 1e3))):
                scaled = Multipliers(mult.l * scale)
                variants.append(compute_ratios(inst, scaled).order)
                variants.append(compute_ratios(inst, scaled, divide_by_m=False).order)
            order_fail += any(not np.array_equal(base, v) for v in variants)
    ok = exact_fail == 0 and order_fail == 0
    record(7, ok, f"{exact_fail} inexact m=1 ratio vectors, {order_fail} order changes over 1000+1000 instances")
    assert exact_fail == 0
    assert order_fail == 0


def test_criterion_8_parser_golden():
    weing = parse_weing(WEING_T1, "T1")
    (orlib,) = parse_orlib(ORLIB_T1, "T1")
    same = orlib.renamed("T1") == weing
    expected = dict(n=3, m=2, values=[6, 10, 12], weights=[[1, 2, 3], [2, 2, 2]],
                    capacities=[5, 5], known_optimum=22)
    fields = (weing.n == 3 and weing.m == 2 and weing.values.tolist() == expected["values"]
              and weing.weights.tolist() == expected["weights"]
              and weing.capacities.tolist() == expected["capacities"]
              and weing.known_optimum == 22)
    rejections = []
    for parse, text, pos in [(parse_weing, "2 1  5 5  1 1", 7),
                             (parse_weing, "2 1  5 5  1 1  3 4 9", 9),
                             (parse_weing, "2 1  5 5  1 -1  3", 6),
                             (parse_weing, "2 1  -5 5  1 1  3", 3),
                             (parse_orlib, "1  2 1 0  5 5  -1 1  3", 7),
                             (parse_orlib, "2  1 1 0 5 1 1", 8)]:
        try:
            parse(text)
        except ParseError as exc:
            rejections.append(exc.position == pos and f"token {pos}" in str(exc))
        else:
            rejections.append(False)
    ok = same and fields and all(rejections)
    record(8, ok, f"weing/orlib T1 identical={same}, fields={fields}, "
                  f"{sum(rejections)}/{len(rejections)} malformed inputs rejected with position")
    assert same and fields
    assert all(rejections)
