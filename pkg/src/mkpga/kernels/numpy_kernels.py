"""Pure numpy implementations of the hot loops.

Every function here has a twin in :mod:`mkpga.kernels.numba_kernels` with the
same signature and the same floating point operations, so both backends
produce bit-identical selections on the same inputs.
"""

from __future__ import annotations

import numpy as np


def greedy_fill(order, cand, weights, capacities):
    """Ratio-ordered skip-and-continue fill, vectorised over rows of ``cand``.

    ``cand`` is a ``(k, n)`` bool array of allowed objects per row. Each row
    scans ``order`` and keeps an object when it fits every constraint given
    the usage accumulated so far in that row.
    """
    k = cand.shape[0]
    m = capacities.shape[0]
    out = np.zeros(cand.shape, dtype=np.bool_)
    use = np.zeros((k, m))
    for i in order:
        col = cand[:, i]
        if not col.any():
            continue
        trial = use + weights[:, i]
        ok = col & np.all(trial <= capacities, axis=1)
        out[:, i] = ok
        use[ok] = trial[ok]
    return out


def breed(parents, rank_pos, draws, flips, order, weights, capacities):
    """Tournament selection, greedy crossover and bit-flip mutation.

    ``draws[c, p, :]`` are the tournament entrants for parent ``p`` of child
    ``c``; the entrant with the smallest ``rank_pos`` wins. The child's
    candidates are the union of both parents, rebuilt by :func:`greedy_fill`,
    then bits where ``flips`` is set are toggled.
    """
    pos = rank_pos[draws]
    winner = np.take_along_axis(draws, pos.argmin(axis=2)[..., None], axis=2)[..., 0]
    cand = parents[winner[:, 0]] | parents[winner[:, 1]]
    return greedy_fill(order, cand, weights, capacities) ^ flips


def exact_dfs(values, weights, capacities, order):
    """Depth-first branch and bound with the remaining-value-sum bound.

    Objects are branched on in ``order`` (include first). Returns
    ``(best_value, best_bits)``.
    """
    n = len(order)
    m = len(capacities)
    vals = values.tolist()
    cols = [weights[:, i].tolist() for i in range(n)]
    caps = capacities.tolist()
    order = [int(i) for i in order]
    rem = [0.0] * (n + 1)
    for k in range(n - 1, -1, -1):
        rem[k] = rem[k + 1] + vals[order[k]]

    x = [False] * n
    best_x = [False] * n
    use = [0.0] * m
    cur = 0.0
    best = 0.0
    state = [0] * (n + 1)
    k = 0
    while k >= 0:
        if k == n:
            if cur > best:
                best = cur
                best_x = x[:]
            k -= 1
            continue
        s = state[k]
        i = order[k]
        if s == 0:
            if cur + rem[k] <= best:
                k -= 1
                continue
            state[k] = 1
            col = cols[i]
            if all(use[j] + col[j] <= caps[j] for j in range(m)):
                x[i] = True
                cur += vals[i]
                for j in range(m):
                    use[j] += col[j]
                k += 1
                state[k] = 0
                continue
            s = 1
        if s == 1:
            if x[i]:
                x[i] = False
                cur -= vals[i]
                col = cols[i]
                for j in range(m):
                    use[j] -= col[j]
            state[k] = 2
            k += 1
            state[k] = 0
            continue
        k -= 1
    return best, np.array(best_x, dtype=np.bool_)
