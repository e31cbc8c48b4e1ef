"""Greedy covers: sweepingLeaves and deepest-first-then-nearest (DFTN)."""
from __future__ import annotations

from .immersion import CoverSolution, Immersion, distance_to_subtree as _dist
from .tree import RootedTree, require_feasible


def sweeping_leaves(t: RootedTree, p: int) -> CoverSolution:
    """Pack runs of DFS-consecutive leaves, closing a run when the next
    leaf would push its cost above ``p``."""
    require_feasible(t, p)
    runs = []
    current: list = []
    nodes = {t.root}
    cost = 0
    for l in t.leaves:
        # extra edges needed to reach l from the current subtree
        path = []
        v = l
        while v not in nodes:
            path.append(v)
            v = t.parent(v)
        extra = 2 * sum(t.edge_length(u) for u in path)
        if cost + extra <= p:
            current.append(l)
            nodes.update(path)
            cost += extra
        else:
            runs.append((current, cost))
            current = [l]
            nodes = {t.root, *t.path_to_root(l)}
            cost = 2 * t.depth(l)
    if current:
        runs.append((current, cost))
    return CoverSolution([Immersion(frozenset(r), c) for r, c in runs])


def dftn(t: RootedTree, p: int) -> CoverSolution:
    """Deepest-first-then-nearest.

    Each immersion starts at the deepest uncovered leaf and then absorbs the
    uncovered leaf nearest to its subtree while the budget allows. It closes
    on the first nearest leaf that does not fit. Ties go to the smaller DFS
    index.
    """
    require_feasible(t, p)
    uncovered = list(t.leaves)  # kept in DFS order so min/max break ties by index
    out = []
    while uncovered:
        first = max(uncovered, key=lambda l: (t.depth(l), -t.leaf_index(l)))
        uncovered.remove(first)
        members = [first]
        nodes = {t.root, *t.path_to_root(first)}
        cost = 2 * t.depth(first)
        # distance from each uncovered leaf to the subtree, refreshed as it grows
        dist = {l: _dist(t, nodes, l) for l in uncovered}
        while uncovered:
            l = min(uncovered, key=lambda x: dist[x])
            if cost + 2 * dist[l] > p:
                break
            cost += 2 * dist[l]
            members.append(l)
            uncovered.remove(l)
            nodes.update(t.path_to_root(l))
            for x in uncovered:
                dist[x] = _dist(t, nodes, x)
        out.append(Immersion(frozenset(members), cost))
    return CoverSolution(out)

