"""Repeated-trial benchmark harness.

Each instance is solved ``trials`` times with seeds ``seed + trial``. Trials
are independent, so they can run on a thread pool (the kernels release the
GIL); records are sorted by trial index before aggregation, which makes the
report independent of the worker count.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ga import GaConfig, evolve
from .instance import Instance, format_number
from .oracle import percent_gap

__all__ = [
    "CSV_HEADER",
    "BenchReport",
    "BenchRow",
    "TrialRecord",
    "emit_report",
    "emit_trials",
    "parse_report_csv",
    "run_benchmark",
    "run_trial",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("instance", "m", "n", "trials", "solved", "mean_seconds", "best_value",
              "reference", "gap_percent", "gap_reference")
TRIALS_HEADER = ("instance", "trial", "seed", "best_value", "solved", "seconds",
                 "generation_found")


@dataclass(frozen=True)
class TrialRecord:
    instance: str
    trial: int
    seed: int
    best_value: float
    solved_exactly: bool
    elapsed: float
    generation_found: int
    upper_bound: float = field(default=float("nan"), compare=False)


@dataclass(frozen=True)
class BenchRow:
    instance: str
    m: int
    n: int
    trials: int
    solved: int = 0
    mean_seconds: float = float("nan")
    best_value: float | None = None
    reference: float | None = None
    gap_percent: float | None = None
    #: ``"optimum"`` or ``"bound"``; ``"error"`` for a failed instance
    gap_reference: str = "optimum"
    records: tuple[TrialRecord, ...] = ()
    error: str | None = None


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    seed: int
    trials: int


def _seed(base: int, trial: int) -> int:
    return (base + trial) % 2**64


def run_trial(instance: Instance, config: GaConfig, trial: int) -> TrialRecord:
    seed = _seed(config.seed, trial)
    res = evolve(instance, config.replace(seed=seed))
    solved = instance.known_optimum is not None and res.best.value == instance.known_optimum
    return TrialRecord(instance.name, trial, seed, res.best.value, solved,
                       res.elapsed, res.generation_found, res.upper_bound)


def _aggregate(instance: Instance, trials: int, outcomes: list) -> BenchRow:
    base = dict(instance=instance.name, m=instance.m, n=instance.n, trials=trials)
    errors = [o for o in outcomes if isinstance(o, BaseException)]
    if errors:
        return BenchRow(**base, gap_reference="error", error=f"{type(errors[0]).__name__}: {errors[0]}")
    records = tuple(sorted(outcomes, key=lambda r: r.trial))
    best = max(r.best_value for r in records)
    if instance.known_optimum is not None:
        reference, kind = instance.known_optimum, "optimum"
    else:
        reference, kind = min(r.upper_bound for r in records), "bound"
    try:
        gap = percent_gap(best, reference)
    except ValueError as exc:
        return BenchRow(**base, gap_reference="error", records=records, error=str(exc))
    return BenchRow(**base, solved=sum(r.solved_exactly for r in records),
                    mean_seconds=float(np.mean([r.elapsed for r in records])),
                    best_value=best, reference=reference, gap_percent=gap,
                    gap_reference=kind, records=records)


def run_benchmark(instances: Sequence[Instance], config: GaConfig | None = None,
                  trials: int = 20, workers: int = 1) -> BenchReport:
    """Solve every instance ``trials`` times and summarise per instance.

    A failing instance yields a row with ``error`` set; the others still run.
    """
    cfg = config or GaConfig()
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")

    def job(inst: Instance, t: int):
        try:
            return run_trial(inst, cfg, t)
        except Exception as exc:  # reported as an error row, never aborts the run
            log.warning("instance %s trial %d failed: %s", inst.name, t, exc)
            return exc

    t0 = time.perf_counter()
    if workers == 1:
        outcomes = [[job(inst, t) for t in range(trials)] for inst in instances]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [[pool.submit(job, inst, t) for t in range(trials)] for inst in instances]
            outcomes = [[f.result() for f in row] for row in futures]
    rows = tuple(_aggregate(inst, trials, out) for inst, out in zip(instances, outcomes))
    log.info("benchmark of %d instances x %d trials took %.1f s",
             len(rows), trials, time.perf_counter() - t0)
    return BenchReport(rows, cfg.seed, trials)


def _num(x: float | None) -> str:
    return "" if x is None else format_number(x)


def _csv_rows(report: BenchReport):
    for r in report.rows:
        if r.error is not None:
            yield [r.instance, r.m, r.n, r.trials, "", "", "", "", "", "error"]
            continue
        yield [r.instance, r.m, r.n, r.trials, r.solved, f"{r.mean_seconds:.3f}",
               _num(r.best_value), _num(r.reference), _num(r.gap_percent), r.gap_reference]


def _table(report: BenchReport) -> str:
    head = ["Instance", "m", "n", "Solves Completely", "Time (mean)", "% gap", "seed"]
    body = []
    for r in report.rows:
        if r.error is not None:
            body.append([r.instance, str(r.m), str(r.n), "error", "-", "-", str(report.seed)])
            continue
        gap = format_number(round(r.gap_percent, 4))
        if r.gap_reference == "bound":
            gap += " (vs bound)"
        body.append([r.instance, str(r.m), str(r.n), f"{r.solved}/{r.trials}",
                     f"{r.mean_seconds:.3f} s", gap, str(report.seed)])
    widths = [max(len(row[c]) for row in [head, *body]) for c in range(len(head))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in [head, *body]]
    lines.extend(f"! {r.instance}: {r.error}" for r in report.rows if r.error is not None)
    return "\n".join(lines) + "\n"


def emit_report(report: BenchReport, fmt: str = "table") -> str:
    """Render as ``"table"`` (human oriented) or ``"csv"`` (stable schema)."""
    if fmt == "table":
        return _table(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(_csv_rows(report))
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r} (expected 'table' or 'csv')")


def emit_trials(report: BenchReport) -> str:
    """Per-trial csv, for gaps and times of individual runs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIALS_HEADER)
    for row in report.rows:
        for t in row.records:
            w.writerow([t.instance, t.trial, t.seed, format_number(t.best_value),
                        int(t.solved_exactly), f"{t.elapsed:.3f}", t.generation_found])
    return buf.getvalue()


def parse_report_csv(text: str) -> list[dict]:
    """Read :func:`emit_report` csv back, converting numeric fields."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected csv header {reader.fieldnames}")
    out = []
    for rec in reader:
        for k in ("m", "n", "trials", "solved"):
            rec[k] = int(rec[k]) if rec[k] else None
        for k in ("mean_seconds", "best_value", "reference", "gap_percent"):
            rec[k] = float(rec[k]) if rec[k] else None
        out.append(rec)
    return out
