"""numba-compiled twins of :mod:`mkpga.kernels.numpy_kernels`.

fastmath stays off: feasibility tests compare accumulated usage against
capacities and must round exactly like the numpy path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_opts = dict(cache=True, nogil=True)


@njit(**_opts)
def _fill_row(order, cand_row, weights, capacities, out_row, use):
    m = capacities.shape[0]
    use[:] = 0.0
    for k in range(order.shape[0]):
        i = order[k]
        if not cand_row[i]:
            continue
        fits = True
        for j in range(m):
            if use[j] + weights[j, i] > capacities[j]:
                fits = False
                break
        if fits:
            out_row[i] = True
            for j in range(m):
                use[j] = use[j] + weights[j, i]


@njit(**_opts)
def greedy_fill(order, cand, weights, capacities):
    k, n = cand.shape
    out = np.zeros((k, n), dtype=np.bool_)
    use = np.empty(capacities.shape[0])
    for r in range(k):
        _fill_row(order, cand[r], weights, capacities, out[r], use)
    return out


@njit(**_opts)
def _tournament(rank_pos, entrants):
    win = entrants[0]
    for t in range(1, entrants.shape[0]):
        e = entrants[t]
        if rank_pos[e] < rank_pos[win]:
            win = e
    return win


@njit(**_opts)
def breed(parents, rank_pos, draws, flips, order, weights, capacities):
    k = draws.shape[0]
    n = parents.shape[1]
    out = np.zeros((k, n), dtype=np.bool_)
    cand = np.empty(n, dtype=np.bool_)
    use = np.empty(capacities.shape[0])
    for c in range(k):
        a = _tournament(rank_pos, draws[c, 0])
        b = _tournament(rank_pos, draws[c, 1])
        for i in range(n):
            cand[i] = parents[a, i] or parents[b, i]
        _fill_row(order, cand, weights, capacities, out[c], use)
        for i in range(n):
            if flips[c, i]:
                out[c, i] = not out[c, i]
    return out


@njit(**_opts)
def exact_dfs(values, weights, capacities, order):
    n = order.shape[0]
    m = capacities.shape[0]
    rem = np.zeros(n + 1)
    for k in range(n - 1, -1, -1):
        rem[k] = rem[k + 1] + values[order[k]]

    x = np.zeros(n, dtype=np.bool_)
    best_x = np.zeros(n, dtype=np.bool_)
    use = np.zeros(m)
    cur = 0.0
    best = 0.0
    state = np.zeros(n + 1, dtype=np.int8)
    k = 0
    while k >= 0:
        if k == n:
            if cur > best:
                best = cur
                best_x[:] = x
            k -= 1
            continue
        s = state[k]
        i = order[k]
        if s == 0:
            if cur + rem[k] <= best:
                k -= 1
                continue
            state[k] = 1
            fits = True
            for j in range(m):
                if use[j] + weights[j, i] > capacities[j]:
                    fits = False
                    break
            if fits:
                x[i] = True
                cur += values[i]
                for j in range(m):
                    use[j] += weights[j, i]
                k += 1
                state[k] = 0
                continue
            s = 1
        if s == 1:
            if x[i]:
                x[i] = False
                cur -= values[i]
                for j in range(m):
                    use[j] -= weights[j, i]
            state[k] = 2
            k += 1
            state[k] = 0
            continue
        k -= 1
    return best, best_x
