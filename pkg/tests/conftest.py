import itertools

import numpy as np
import pytest

from mkpga.instance import Instance, parse_weing

WEING_T1 = "3 2  6 10 12  1 2 3  2 2 2  5 5  22"
ORLIB_T1 = "1  3 2 22  6 10 12  1 2 3  2 2 2  5 5"


def brute_force(instance: Instance):
    """Enumerate all 2^n selections.

    Shares no code with the library beyond reading the instance arrays:
    small cases use plain Python loops, larger ones chunked numpy products.
    """
    n = instance.n
    if n <= 10:
        vals = instance.values.tolist()
        rows = instance.weights.tolist()
        caps = instance.capacities.tolist()
        best, best_bits = 0.0, (0,) * n
        for bits in itertools.product((0, 1), repeat=n):
            if all(sum(w * b for w, b in zip(row, bits)) <= c for row, c in zip(rows, caps)):
                v = sum(x * b for x, b in zip(vals, bits))
                if v > best:
                    best, best_bits = v, bits
        return best, np.array(best_bits, dtype=bool)

    best, best_code = 0.0, 0
    shifts = np.arange(n)
    chunk = 1 << 15
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        x = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        val = x @ instance.values
        ok = np.all(x @ instance.weights.T <= instance.capacities, axis=1)
        val[~ok] = -1.0
        k = int(np.argmax(val))
        if val[k] > best:
            best, best_code = float(val[k]), int(codes[k])
    return best, ((best_code >> shifts) & 1).astype(bool)


def random_bits(rng, n, p=0.5):
    return rng.random(n) < p


@pytest.fixture
def t1():
    return parse_weing(WEING_T1, "T1")


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")
