"""Exact Min-Distance / Min-Immersions solvers.

``bc_min_distance`` and ``bc_min_immersions`` run a branch-and-cut search over
leaf partitions. ``brute_force_*`` enumerate every set partition of the leaves
and serve as test oracles.
"""
from __future__ import annotations

import time
from typing import Callable, Iterator, List, Optional, Sequence

from .heuristics import dftn, sweeping_leaves
from .immersion import CoverSolution, Immersion
from .tree import RootedTree, require_feasible

BRUTE_FORCE_LEAF_CAP = 10


class SearchLimitExceeded(ValueError):
    pass


# -- edge masks --------------------------------------------------------------
# Bit v of a mask stands for the edge (parent(v), v).

def path_masks(t: RootedTree, leaves: Sequence[int]) -> List[int]:
    out = []
    for l in leaves:
        m = 0
        for v in t.path_to_root(l):
            m |= 1 << v
        out.append(m)
    return out


def mask_weigher(t: RootedTree) -> Callable[[int], int]:
    """Return ``f(mask) -> total edge length`` for this tree."""
    if t.is_unit():
        return int.bit_count
    nbytes = (t.n + 8) // 8
    tables = []
    for b in range(nbytes):
        row = []
        for byte in range(256):
            s = 0
            for j in range(8):
                v = 8 * b + j
                if byte >> j & 1 and v != t.root and 1 <= v <= t.n:
                    s += t.edge_length(v)
            row.append(s)
        tables.append(row)

    def weight(mask: int) -> int:
        s = 0
        for row in tables:
            if not mask:
                break
            s += row[mask & 0xFF]
            mask >>= 8
        return s

    return weight


# -- brute force --------------------------------------------------------------

def set_partitions(m: int) -> Iterator[List[int]]:
    """Yield every partition of ``range(m)`` as a list of block bitmasks."""
    blocks: List[int] = []

    def rec(i):
        if i == m:
            yield list(blocks)
            return
        bit = 1 << i
        for j in range(len(blocks)):
            blocks[j] |= bit
            yield from rec(i + 1)
            blocks[j] ^= bit
        blocks.append(bit)
        yield from rec(i + 1)
        blocks.pop()

    if m == 0:
        yield []
        return
    yield from rec(0)


def _subset_costs(t: RootedTree, leaves: Sequence[int]) -> List[int]:
    masks = path_masks(t, leaves)
    weight = mask_weigher(t)
    union = [0] * (1 << len(leaves))
    for s in range(1, len(union)):
        low = (s & -s).bit_length() - 1
        union[s] = union[s & (s - 1)] | masks[low]
    return [2 * weight(u) for u in union]


def _brute_force(t, p, key, cap):
    require_feasible(t, p)
    leaves = list(t.leaves)
    if len(leaves) > cap:
        raise SearchLimitExceeded(f"{len(leaves)} leaves exceeds brute-force cap {cap}")
    cost = _subset_costs(t, leaves)
    best = best_blocks = None
    for blocks in set_partitions(len(leaves)):
        cs = [cost[b] for b in blocks]
        if max(cs, default=0) > p:
            continue
        k = key(cs)
        if best is None or k < best:
            best, best_blocks = k, blocks
    sets = [[leaves[i] for i in range(len(leaves)) if b >> i & 1] for b in best_blocks]
    return CoverSolution.from_leaf_sets(t, sets, optimal=True)


def brute_force_min_distance(t: RootedTree, p: int, cap: int = BRUTE_FORCE_LEAF_CAP) -> CoverSolution:
    return _brute_force(t, p, lambda cs: sum(cs), cap)


def brute_force_min_immersions(t: RootedTree, p: int, cap: int = BRUTE_FORCE_LEAF_CAP) -> CoverSolution:
    return _brute_force(t, p, lambda cs: (len(cs), sum(cs)), cap)


def feasible_partitions(t: RootedTree, p: int, cap: int):
    """Yield ``(leaf_sets, costs)`` for every leaf partition with all blocks within budget."""
    leaves = list(t.leaves)
    if len(leaves) > cap:
        raise SearchLimitExceeded(f"{len(leaves)} leaves exceeds brute-force cap {cap}")
    cost = _subset_costs(t, leaves)
    for blocks in set_partitions(len(leaves)):
        cs = [cost[b] for b in blocks]
        if max(cs, default=0) <= p:
            yield [[leaves[i] for i in range(len(leaves)) if b >> i & 1] for b in blocks], cs


# -- branch and cut -----------------------------------------------------------

class _Abort(Exception):
    pass


class _Done(_Abort):
    """Incumbent meets the root lower bound."""


class BranchAndCut:
    """Search over leaf partitions, leaves taken deepest first.

    ``new_tree`` anchors a new immersion at the first uncovered leaf;
    ``new_node`` walks the remaining leaves deciding include / exclude.
    On top of that skeleton the search prunes with:

    * a per-edge capacity bound: the edge into v carries at least
      ceil(2 W_v / (p - 2 depth(v))) immersions, W_v being the still-uncovered
      edge length below v;
    * twin symmetry: sibling leaves with equal edge lengths are
      interchangeable, so a twin may only join the immersion if its
      predecessor twin did;
    * a table of the cheapest prefix seen for each covered-leaf set.

    The incumbent is seeded with the better heuristic cover. ``cuts=False``
    drops all of the above and only checks the incumbent when an immersion
    is closed, which is the bare search skeleton (kept for cross-checks).
    """

    def __init__(self, t: RootedTree, p: int, by_count: bool = False,
                 node_limit: Optional[int] = None, time_limit: Optional[float] = None,
                 cuts: bool = True):
        require_feasible(t, p)
        self.t, self.p, self.by_count, self.cuts = t, p, by_count, cuts
        self.node_limit, self.time_limit = node_limit, time_limit
        self.order = sorted(t.leaves, key=lambda l: (-t.depth(l), t.leaf_index(l)))
        self.masks = path_masks(t, self.order)
        self.weight = mask_weigher(t)
        m = len(self.order)
        self.full = (1 << m) - 1
        # twin[i] = previous position holding an interchangeable leaf, or -1
        self.twin = [-1] * m
        last = {}
        for i, l in enumerate(self.order):
            sig = (t.parent(l), t.edge_length(l))
            self.twin[i] = last.get(sig, -1)
            last[sig] = i
        self.below = {}
        for v in t.nodes():
            self.below[v] = 0
        for v in reversed(t.preorder):
            par = t.parent(v)
            if par is not None:
                self.below[par] |= self.below[v] | (1 << v)
        self.edge_nodes = [v for v in t.preorder if v != t.root]
        self.nodes_explored = 0
        self.seen = {}

    # objective as a comparable key
    def _key(self, count, dist):
        return (count, dist) if self.by_count else (dist,)

    def _remaining_bound(self, covered):
        """Lower bound on cost (and count) of covering the uncovered leaves,
        plus the mask of edges whose bound is a single traversal."""
        rem = 0
        for i, m in enumerate(self.masks):
            if not covered >> i & 1:
                rem |= m
        if not self.cuts:
            return 0, 0, 0
        t, p, weight = self.t, self.p, self.weight
        dist = 0
        single = 0
        tmax = 0
        for v in self.edge_nodes:
            if not rem >> v & 1:
                continue
            room = p - 2 * t.depth(v)
            inner = weight(rem & self.below[v])
            need = 1 if room <= 0 else max(1, -(-2 * inner // room))
            if need == 1:
                single |= 1 << v
            tmax = max(tmax, need)
            dist += 2 * t.edge_length(v) * need
        count = max(tmax, -(-dist // p)) if dist else 0
        return dist, count, single

    def solve(self) -> CoverSolution:
        t = self.t
        if self.cuts:
            seeds = [sweeping_leaves(t, self.p), dftn(t, self.p)]
            seed = min(seeds, key=lambda s: self._key(s.count, s.total_distance))
            self.best_key = self._key(seed.count, seed.total_distance)
            self.best = [sorted(im.leaves) for im in seed.immersions]
            root_dist, root_count, _ = self._remaining_bound(0)
            self.floor = self._key(root_count, root_dist)
        else:
            self.best_key = self._key(float("inf"), float("inf"))
            self.best = []
            self.floor = self._key(-1, -1)
        self.committed: List[List[int]] = []
        self.deadline = None if self.time_limit is None else time.monotonic() + self.time_limit
        optimal = True
        if self.best_key > self.floor:
            try:
                self._new_tree(0, 0, 0)
            except _Done:
                pass
            except _Abort:
                optimal = False
        return CoverSolution.from_leaf_sets(t, self.best, optimal=optimal,
                                            nodes_explored=self.nodes_explored)

    def _tick(self):
        self.nodes_explored += 1
        if self.node_limit is not None and self.nodes_explored > self.node_limit:
            raise _Abort
        if self.deadline is not None and not self.nodes_explored & 1023:
            if time.monotonic() > self.deadline:
                raise _Abort

    def _new_tree(self, covered, cdist, ccount):
        self._tick()
        if covered == self.full:
            key = self._key(ccount, cdist)
            if key < self.best_key:
                self.best_key = key
                self.best = [list(b) for b in self.committed]
                if key <= self.floor:
                    raise _Done
            return
        if self.cuts:
            prev = self.seen.get(covered)
            key = self._key(ccount, cdist)
            if prev is not None and prev <= key:
                return
            self.seen[covered] = key
        rdist, rcount, single = self._remaining_bound(covered)
        if self._key(ccount + rcount, cdist + rdist) >= self.best_key:
            return
        a = (~covered & (covered + 1)).bit_length() - 1  # lowest uncovered position
        self._new_node(a + 1, covered | (1 << a), self.masks[a], 2 * self.weight(self.masks[a]),
                       0, [a], cdist, ccount, (cdist + rdist, ccount + rcount, single))

    def _new_node(self, i, covered, imask, icost, emask, members, cdist, ccount, bound):
        self._tick()
        if self.cuts and self._pruned(emask, imask, cdist, ccount, bound):
            return
        m = len(self.order)
        while i < m and covered >> i & 1:
            i += 1
        if i == m:
            if self._key(ccount, cdist) >= self.best_key:
                return
            self.committed.append([self.order[j] for j in members])
            try:
                self._new_tree(covered, cdist + icost, ccount + 1)
            finally:
                self.committed.pop()
            return
        mask = self.masks[i]
        tw = self.twin[i]
        if not self.cuts or tw < 0 or covered >> tw & 1:
            c = icost + 2 * self.weight(mask & ~imask)
            if c <= self.p:
                members.append(i)
                self._new_node(i + 1, covered | (1 << i), imask | mask, c, emask,
                               members, cdist, ccount, bound)
                members.pop()
        self._new_node(i + 1, covered, imask, icost, emask | mask, members, cdist, ccount, bound)

    def _pruned(self, emask, imask, cdist, ccount, bound):
        bdist, bcount, single = bound
        # edges used by this immersion that an excluded leaf also needs
        lb_dist = bdist + 2 * self.weight(imask & emask & single)
        if self.by_count:
            lb_count = max(bcount, ccount + -(-(lb_dist - cdist) // self.p))
            if emask:
                lb_count = max(lb_count, ccount + 2)
            key = (lb_count, lb_dist)
        else:
            key = (lb_dist,)
        return key >= self.best_key


def bc_min_distance(t: RootedTree, p: int, node_limit: Optional[int] = None,
                    time_limit: Optional[float] = None) -> CoverSolution:
    """Minimum total distance cover. ``optimal`` is False if a limit cut the search short."""
    return BranchAndCut(t, p, False, node_limit, time_limit).solve()


def bc_min_immersions(t: RootedTree, p: int, node_limit: Optional[int] = None,
                      time_limit: Optional[float] = None) -> CoverSolution:
    """Fewest immersions; ties broken by total distance."""
    return BranchAndCut(t, p, True, node_limit, time_limit).solve()
