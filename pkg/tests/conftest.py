import random

import pytest

from treeinspect.tree import RootedTree, parse_tree, random_tree

GOLDEN = "4 1\n1 2 1\n2 3 1\n2 4 1"


def star(m: int) -> RootedTree:
    return RootedTree(m + 1, 1, [(1, v, 1) for v in range(2, m + 2)])


def path(n: int) -> RootedTree:
    return RootedTree(n, 1, [(v - 1, v, 1) for v in range(2, n + 1)])


def weighted_random_tree(n: int, seed: int, max_len: int = 3) -> RootedTree:
    base = random_tree(n, seed)
    rng = random.Random(seed)
    return RootedTree(n, 1, [(u, v, rng.randint(1, max_len)) for u, v, _ in base.edges()])


@pytest.fixture
def golden():
    return parse_tree(GOLDEN)
