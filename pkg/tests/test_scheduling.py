import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from treeinspect.exact import brute_force_min_distance
from treeinspect.heuristics import dftn
from treeinspect.immersion import verify_solution
from treeinspect.scheduling import (brute_force_makespan, brute_force_min_time,
                                    dp_makespan_partition, lpt_makespan, min_time_heuristic)
from treeinspect.tree import InstanceParams, height, random_tree

from conftest import star


def loads(costs, blocks):
    return [sum(costs[i] for i in b) for b in blocks]


@pytest.mark.parametrize("costs, k, expected", [
    ([4, 4], 2, 4),
    ([6], 2, 6),
    ([5, 3, 3, 3], 2, 8),
])
def test_dp_examples(costs, k, expected):
    assert brute_force_makespan(costs, k) == expected
    value, blocks = dp_makespan_partition(costs, k)
    assert value == expected
    assert max(loads(costs, blocks)) == expected


def test_dp_edge_cases():
    assert dp_makespan_partition([], 3) == (0, [[], [], []])
    with pytest.raises(ValueError):
        dp_makespan_partition([1], 0)
    with pytest.raises(ValueError):
        brute_force_makespan([1], 0)


def test_brute_force_trivial_cases():
    assert brute_force_makespan([3, 9, 2], 1) == 14
    assert brute_force_makespan([3, 9, 2], 5) == 9
    with pytest.raises(ValueError):
        brute_force_makespan([1] * 30, 2)


def test_dp_matches_brute_force():
    rng = random.Random(0)
    for _ in range(300):
        m, k = rng.randint(0, 10), rng.randint(1, 4)
        costs = [rng.randint(1, 50) for _ in range(m)]
        value, blocks = dp_makespan_partition(costs, k)
        assert value == brute_force_makespan(costs, k)
        assert len(blocks) == k
        assert sorted(i for b in blocks for i in b) == list(range(m))
        assert max(loads(costs, blocks), default=0) == value


def test_witness_is_lexicographically_smallest():
    rng = random.Random(1)
    for _ in range(100):
        m, k = rng.randint(1, 6), rng.randint(1, 3)
        costs = [rng.randint(1, 20) for _ in range(m)]
        value, blocks = dp_makespan_partition(costs, k)
        vec = [None] * m
        for b, block in enumerate(blocks):
            for i in block:
                vec[i] = b
        first = next(v for v in itertools.product(range(k), repeat=m)
                     if max(loads(costs, [[i for i in range(m) if v[i] == b] for b in range(k)])) == value)
        assert tuple(vec) == first


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=1, max_size=9), st.integers(1, 5))
def test_dp_bounds_and_monotone(costs, k):
    value, _ = dp_makespan_partition(costs, k)
    assert max(costs) <= value <= sum(costs)
    assert value >= -(-sum(costs) // k)
    assert value <= lpt_makespan(costs, k)
    assert dp_makespan_partition(costs, k + 1)[0] <= value
    if k >= len(costs):
        assert value == max(costs)


def test_min_time_heuristic_golden(golden):
    sol = min_time_heuristic(golden, 4, 2)
    assert sol.makespan == 4 and sorted(len(b) for b in sol.assignment) == [1, 1]
    sol = min_time_heuristic(golden, 6, 2)
    assert sol.makespan == 6 and sol.count == 1


def test_min_time_heuristic_single_agent():
    for seed in range(30):
        t = random_tree(25, seed)
        p = 2 * height(t)
        assert min_time_heuristic(t, p, 1).makespan == dftn(t, p).total_distance


def test_brute_force_min_time_examples(golden):
    sol = brute_force_min_time(golden, 6, 2)
    assert sol.makespan == 4
    assert sorted(im.cost for im in sol.immersions) == [4, 4]
    assert brute_force_min_time(golden, 6, 1).makespan == 6
    sol = brute_force_min_time(star(3), 4, 3)
    assert sol.makespan == 2 and sol.count == 3


def _tractable(count, seed):
    rng = random.Random(seed)
    while count:
        t = random_tree(rng.randint(2, 12), rng.getrandbits(32))
        if len(t.leaves) <= 9:
            count -= 1
            yield t


def test_pipeline_vs_exact_min_time():
    for t in _tractable(60, 2):
        h = height(t)
        for p in (2 * h, 2 * h + 2):
            for k in (1, 2, 3):
                best = brute_force_min_time(t, p, k)
                heur = min_time_heuristic(t, p, k)
                for sol in (best, heur):
                    assert verify_solution(t, InstanceParams(p, k), sol) == []
                assert heur.makespan >= best.makespan
            assert brute_force_min_time(t, p, 1).makespan == \
                brute_force_min_distance(t, p).total_distance
