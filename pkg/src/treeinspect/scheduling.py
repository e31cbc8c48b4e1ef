"""Assigning immersions to k agents: exact makespan partition and Min-Time solvers."""
from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .exact import feasible_partitions
from .heuristics import dftn
from .immersion import CoverSolution, Immersion
from .tree import RootedTree, require_feasible

BRUTE_FORCE_ASSIGNMENT_CAP = 10 ** 7
MIN_TIME_LEAF_CAP = 9


def lpt_makespan(costs: Sequence[int], k: int) -> int:
    """Longest-processing-time greedy; only used as an upper bound."""
    loads = [0] * k
    for c in sorted(costs, reverse=True):
        j = loads.index(min(loads))
        loads[j] += c
    return max(loads)


def _dp_value(costs: Sequence[int], k: int) -> int:
    ub = lpt_makespan(costs, k)
    states = {(0,) * k}
    for c in sorted(costs, reverse=True):
        nxt = set()
        for loads in states:
            prev = None
            for j, x in enumerate(loads):
                if x == prev:
                    continue
                prev = x
                if x + c > ub:
                    break  # loads are sorted, the rest are no better
                new = loads[:j] + loads[j + 1:]
                nxt.add(tuple(sorted(new + (x + c,))))
        states = nxt
    return min(max(s) for s in states)


def _witness(costs: Sequence[int], k: int, limit: int) -> List[int]:
    """Lexicographically smallest block vector with every load <= limit."""
    m = len(costs)

    @lru_cache(maxsize=None)
    def fits(i, loads):
        if i == m:
            return True
        prev = None
        for j, x in enumerate(loads):
            if x != prev and x + costs[i] <= limit:
                new = tuple(sorted(loads[:j] + (x + costs[i],) + loads[j + 1:]))
                if fits(i + 1, new):
                    return True
            prev = x
        return False

    loads = [0] * k
    vec = []
    for i, c in enumerate(costs):
        for b in range(k):
            if loads[b] + c > limit:
                continue
            loads[b] += c
            if fits(i + 1, tuple(sorted(loads))):
                vec.append(b)
                break
            loads[b] -= c
        else:
            raise AssertionError("no assignment within the computed makespan")
    return vec


def dp_makespan_partition(costs: Sequence[int], k: int) -> Tuple[int, List[List[int]]]:
    """Minimum makespan of ``costs`` over ``k`` agents, with a witness.

    Forward DP over sorted load vectors, jobs taken largest first, states
    above the LPT bound discarded. Returns ``(makespan, blocks)`` where
    ``blocks[j]`` lists the job indices given to agent j (possibly empty).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    costs = [int(c) for c in costs]
    if any(c < 0 for c in costs):
        raise ValueError("costs must be non-negative")
    if not costs:
        return 0, [[] for _ in range(k)]
    value = _dp_value(costs, k)
    vec = _witness(tuple(costs), k, value)
    blocks = [[] for _ in range(k)]
    for i, b in enumerate(vec):
        blocks[b].append(i)
    return value, blocks


def brute_force_makespan(costs: Sequence[int], k: int, cap: int = BRUTE_FORCE_ASSIGNMENT_CAP) -> int:
    """Minimum makespan by trying all k**m assignments."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = len(costs)
    if m == 0:
        return 0
    total = k ** m
    if total > cap:
        raise ValueError(f"{k}**{m} assignments exceeds cap {cap}")
    idx = np.arange(total, dtype=np.int64)
    loads = np.zeros((total, k), dtype=np.int64)
    rows = np.arange(total)
    for c in costs:
        loads[rows, idx % k] += c
        idx //= k
    return int(loads.max(axis=1).min())


def min_time_heuristic(t: RootedTree, p: int, k: int) -> CoverSolution:
    """DFTN immersions, then the optimal split of them among k agents."""
    sol = dftn(t, p)
    _, blocks = dp_makespan_partition([im.cost for im in sol.immersions], k)
    sol.assignment = blocks
    return sol


def brute_force_min_time(t: RootedTree, p: int, k: int, cap: int = MIN_TIME_LEAF_CAP) -> CoverSolution:
    """Exact Min-Time over every feasible leaf partition (small trees only)."""
    require_feasible(t, p)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    best = None
    for sets, cs in feasible_partitions(t, p, cap):
        lower = max(max(cs, default=0), -(-sum(cs) // k))
        if best is not None and (lower, 0) > best[0]:
            continue
        value, blocks = dp_makespan_partition(cs, k)
        key = (value, sum(cs))
        if best is None or key < best[0]:
            best = (key, sets, cs, blocks)
    _, sets, cs, blocks = best
    ims = [Immersion(frozenset(s), c) for s, c in zip(sets, cs)]
    return CoverSolution(ims, blocks, optimal=True)
