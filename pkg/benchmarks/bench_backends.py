"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 5]

Each kernel is called once per backend before timing so numba compilation
is excluded. Inputs are identical for both backends and results are
checked for equality.
"""

import argparse
import time

import numpy as np

from mkpga import ga
from mkpga.instance import random_instance
from mkpga.kernels import get_backend
from mkpga.multipliers import compute_multipliers, compute_ratios, init_multipliers


def best_time(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def kernel_cases():
    rng = np.random.default_rng(0)
    inst = random_instance(105, 5, 1)
    order = compute_ratios(inst, compute_multipliers(inst, 100)).order
    pop = rng.random((100, inst.n)) < 0.5
    pos = rng.permutation(100).astype(np.int64)
    draws = rng.integers(0, 100, size=(98, 2, 3))
    flips = rng.random((98, inst.n)) < 1 / inst.n
    small = random_instance(26, 3, 2)
    small_order = compute_ratios(small, init_multipliers(small)).order
    return {
        "greedy_fill (100 x 105)": lambda k: k.greedy_fill(order, pop, inst.weights, inst.capacities),
        "breed (98 children, n=105)": lambda k: k.breed(pop, pos, draws, flips, order,
                                                        inst.weights, inst.capacities),
        "exact_dfs (n=26, m=3)": lambda k: k.exact_dfs(small.values, small.weights,
                                                       small.capacities, small_order),
    }


def evolve_case(backend):
    inst = random_instance(105, 5, 3)
    cfg = ga.GaConfig(generations=200, no_improvement_limit=None, seed=1)
    saved = ga.kernels.breed
    ga.kernels.breed = backend.breed
    try:
        return ga.evolve(inst, cfg).best.value
    finally:
        ga.kernels.breed = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"numba": get_backend("numba"), "numpy": get_backend("numpy")}
    cases = kernel_cases()
    cases["evolve (pop 100, 200 gens, n=105)"] = evolve_case
    print(f"{'case':36} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for label, fn in cases.items():
        times, outs = {}, {}
        for name, backend in backends.items():
            fn(backend)  # warm-up / compile
            times[name], outs[name] = best_time(lambda: fn(backend), args.repeat)
        a, b = outs["numba"], outs["numpy"]
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) \
            else np.array_equal(a, b)
        flag = "" if same else "  MISMATCH"
        print(f"{label:36} {times['numba']:10.4f} {times['numpy']:10.4f} "
              f"{times['numpy'] / times['numba']:8.1f}x{flag}")


if __name__ == "__main__":
    main()
