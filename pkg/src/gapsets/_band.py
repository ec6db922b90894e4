"""Fast counting of Kunz tuples with all coordinates in ``[l, 2l + 1]``.

Inside that band the wrap-around inequalities ``k_i + k_j + 1 >= k_t`` always
hold (left side >= 2l + 1), and ``k_i + k_j >= k_{i+j}`` can only fail as
``l + l < 2l + 1``.  So a band tuple is valid iff no position holding
``2l + 1`` is the sum of two (not necessarily distinct) positions holding
``l``.  The search walks subsets ``A`` of positions holding ``l`` and records,
for every prefix length ``n``, the histogram of ``(n, |A|, free)`` where
``free`` counts positions outside ``A`` and ``A + A``; the remaining values
are then counted in closed form.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

MAX_POSITIONS = 61
_MASK62 = (1 << 62) - 1

# numba only pays off once the search is large enough to amortise import+compile
JIT_THRESHOLD = 22


class BudgetExceededError(RuntimeError):
    """Search would expand more nodes than the configured budget."""


def _walk(level, g_max, n_max, depth0, A0, S0, a0, f0, budget, H):
    """Depth-first walk below one node; returns nodes expanded, or -1 past budget.

    Written in the numba-compatible subset so it can run jitted or not.
    """
    A = np.zeros(n_max + 2, np.int64)
    S = np.zeros(n_max + 2, np.int64)
    a = np.zeros(n_max + 2, np.int64)
    f = np.zeros(n_max + 2, np.int64)
    choice = np.zeros(n_max + 2, np.int64)
    A[depth0] = A0
    S[depth0] = S0
    a[depth0] = a0
    f[depth0] = f0
    nodes = 0
    if depth0 >= n_max:
        return 0
    p = depth0 + 1
    choice[p] = 0
    while p > depth0:
        c = choice[p]
        if c >= 2:
            p -= 1
            if p > depth0:
                choice[p] += 1
            continue
        bit = np.int64(1) << p
        if c == 0:
            na = a[p - 1] + 1
            nA = A[p - 1] | bit
            nS = (S[p - 1] | (nA << p)) & _MASK62
            nf = f[p - 1]
        else:
            na = a[p - 1]
            nA = A[p - 1]
            nS = S[p - 1]
            nf = f[p - 1] + (0 if (S[p - 1] & bit) else 1)
        if na * level + (p - na) * (level + 1) > g_max:
            choice[p] += 1
            continue
        nodes += 1
        if budget >= 0 and nodes > budget:
            return -1
        H[p, na, nf] += 1
        A[p] = nA
        S[p] = nS
        a[p] = na
        f[p] = nf
        if p < n_max:
            p += 1
            choice[p] = 0
        else:
            choice[p] += 1
    return nodes


@lru_cache(maxsize=1)
def _jitted():
    import numba

    return numba.njit(cache=True, nogil=True)(_walk)


def _run_walk(args, jit):
    level, g_max, n_max = args[:3]
    H = np.zeros((n_max + 1, n_max + 1, n_max + 1), np.int64)
    fn = _jitted() if jit else _walk
    nodes = fn(*args, H)
    return H, nodes


def _frontier(level, g_max, n_max, depth):
    """Nodes at ``depth`` (as walk start states) plus histogram of shallower nodes."""
    H = np.zeros((n_max + 1, n_max + 1, n_max + 1), np.int64)
    layer = [(0, 0, 0, 0)]
    for p in range(1, depth + 1):
        nxt = []
        for A, S, a, f in layer:
            bit = 1 << p
            for inside in (True, False):
                if inside:
                    nA = A | bit
                    node = (nA, (S | (nA << p)) & _MASK62, a + 1, f)
                else:
                    node = (A, S, a, f + (0 if S & bit else 1))
                if node[2] * level + (p - node[2]) * (level + 1) > g_max:
                    continue
                H[p, node[2], node[3]] += 1
                nxt.append(node)
        layer = nxt
    return H, layer


def band_histogram(level: int, g_max: int, jobs: int = 1, budget: int | None = None):
    """Histogram ``H[n, a, free]`` over all position subsets; see module doc."""
    if level < 1 or g_max < 0:
        raise ValueError("need level >= 1 and g_max >= 0")
    n_max = g_max // level
    if n_max > MAX_POSITIONS:
        raise BudgetExceededError(
            f"band search needs {n_max} positions; at most {MAX_POSITIONS} supported"
        )
    jit = n_max >= JIT_THRESHOLD
    limit = -1 if budget is None else int(budget)
    if jobs <= 1 or n_max < 12:
        H, nodes = _run_walk((level, g_max, n_max, 0, 0, 0, 0, 0, limit), jit)
        if nodes < 0:
            raise BudgetExceededError(f"band search exceeded budget of {budget} nodes")
        return H

    from concurrent.futures import ProcessPoolExecutor

    split = min(n_max - 1, 10)
    H, layer = _frontier(level, g_max, n_max, split)
    shallow = int(H.sum())
    tasks = [(level, g_max, n_max, split, A, S, a, f, limit) for A, S, a, f in layer]
    total = shallow
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part, nodes in pool.map(_run_walk, tasks, [jit] * len(tasks), chunksize=8):
            if nodes < 0:
                raise BudgetExceededError(f"band search exceeded budget of {budget} nodes")
            total += nodes
            H += part
    if budget is not None and total > budget:
        raise BudgetExceededError(f"band search exceeded budget of {budget} nodes")
    return H


@lru_cache(maxsize=None)
def _middle_ways(level: int, count: int, total: int) -> int:
    """Number of ``count``-tuples with entries in ``[level+1, 2*level]`` summing to ``total``."""
    lo, hi = level + 1, 2 * level
    if count == 0:
        return 1 if total == 0 else 0
    if total < count * lo or total > count * hi:
        return 0
    return sum(_middle_ways(level, count - 1, total - v) for v in range(lo, hi + 1))


def band_counts(level: int, g_max: int, jobs: int = 1, budget: int | None = None) -> list[int]:
    """``[n'_{g,level} for g in 0..g_max]``; the empty tuple counts at g = 0."""
    H = band_histogram(level, g_max, jobs=jobs, budget=budget)
    top = 2 * level + 1
    out = [0] * (g_max + 1)
    out[0] = 1
    for n, a, free in zip(*np.nonzero(H)):
        n, a, free = int(n), int(a), int(free)
        mult = int(H[n, a, free])
        base = a * level
        for t in range(free + 1):
            middle = n - a - t
            ways_t = comb(free, t) * mult
            rest_min = base + t * top + middle * (level + 1)
            for g in range(rest_min, min(g_max, base + t * top + middle * 2 * level) + 1):
                w = _middle_ways(level, middle, g - base - t * top)
                if w:
                    out[g] += ways_t * w
    return out
