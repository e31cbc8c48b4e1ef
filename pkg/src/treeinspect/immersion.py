"""Immersions (root-closed walks) encoded by their leaf sets, and cover solutions.

An immersion over leaves S walks every edge of the union of root-to-leaf
paths of S exactly twice, so its cost is twice that union's total length.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

from .tree import InstanceParams, RootedTree, node_distance


def _check_leaves(t: RootedTree, leaves: Iterable[int]) -> None:
    for l in leaves:
        if not t.is_leaf(l):
            raise ValueError(f"node {l} is not a leaf of the tree")


def immersion_cost(t: RootedTree, leaf_set: Iterable[int]) -> int:
    leaf_set = list(leaf_set)
    _check_leaves(t, leaf_set)
    marked = {t.root}
    total = 0
    for l in leaf_set:
        v = l
        while v not in marked:
            marked.add(v)
            total += t.edge_length(v)
            v = t.parent(v)
    return 2 * total


def _subtree_nodes(t: RootedTree, leaf_set: Iterable[int]) -> set:
    nodes = {t.root}
    for l in leaf_set:
        v = l
        while v not in nodes:
            nodes.add(v)
            v = t.parent(v)
    return nodes


def distance_to_subtree(t: RootedTree, nodes: set, v: int) -> int:
    """Distance from ``v`` to the nearest node of a root-containing subtree."""
    start = v
    while v not in nodes:
        v = t.parent(v)
    return t.depth(start) - t.depth(v)


@dataclass(frozen=True)
class Immersion:
    leaves: frozenset
    cost: int

    @classmethod
    def of(cls, t: RootedTree, leaves: Iterable[int]) -> "Immersion":
        leaves = frozenset(leaves)
        return cls(leaves, immersion_cost(t, leaves))

    def ordered(self, t: RootedTree) -> List[int]:
        """Leaves in DFS order."""
        return sorted(self.leaves, key=t.leaf_index)

    def walk(self, t: RootedTree) -> List[int]:
        """The closed walk r -> ... -> r visiting the leaves in DFS order."""
        nodes = _subtree_nodes(t, self.leaves)
        out = []

        def visit(u):
            out.append(u)
            for c in t.children(u):
                if c in nodes:
                    visit(c)
                    out.append(u)

        visit(t.root)
        return out


def added_cost(t: RootedTree, current: Immersion, l: int) -> int:
    """Extra cost of adding leaf ``l`` to ``current``."""
    _check_leaves(t, [l])
    if l in current.leaves:
        raise ValueError(f"leaf {l} already in the immersion")
    nodes = _subtree_nodes(t, current.leaves)
    return 2 * distance_to_subtree(t, nodes, l)


def consecutive_leaf_cost(t: RootedTree, run: Sequence[int]) -> int:
    """Cost of a run of DFS-consecutive leaves as the sum of hop distances
    r -> l_i -> l_{i+1} -> ... -> l_{i+c} -> r."""
    run = list(run)
    if not run:
        return 0
    _check_leaves(t, run)
    idx = [t.leaf_index(l) for l in run]
    if idx != list(range(idx[0], idx[0] + len(idx))):
        raise ValueError("leaves are not a contiguous run of the DFS leaf order")
    total = t.depth(run[0]) + t.depth(run[-1])
    for a, b in zip(run, run[1:]):
        total += node_distance(t, a, b)
    return total


def is_feasible(t: RootedTree, leaf_set: Iterable[int], p: int) -> bool:
    return immersion_cost(t, leaf_set) <= p


@dataclass
class CoverSolution:
    immersions: List[Immersion]
    assignment: Optional[List[List[int]]] = None
    # diagnostics from the solver that produced this solution
    optimal: Optional[bool] = None
    nodes_explored: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def total_distance(self) -> int:
        return sum(im.cost for im in self.immersions)

    @property
    def count(self) -> int:
        return len(self.immersions)

    @property
    def makespan(self) -> Optional[int]:
        if self.assignment is None:
            return None
        return max((sum(self.immersions[i].cost for i in block) for block in self.assignment),
                   default=0)

    @classmethod
    def from_leaf_sets(cls, t: RootedTree, sets: Iterable[Iterable[int]], **kw) -> "CoverSolution":
        ims = [Immersion.of(t, s) for s in sets]
        ims.sort(key=lambda im: min((t.leaf_index(l) for l in im.leaves), default=-1))
        return cls(ims, **kw)


def verify_solution(t: RootedTree, params: InstanceParams, sol: CoverSolution,
                    claimed_total: Optional[int] = None,
                    claimed_makespan: Optional[int] = None) -> List[str]:
    """Check a solution and return every violation found (empty list = ok)."""
    problems = []
    seen = {}
    for i, im in enumerate(sol.immersions):
        bad = [l for l in im.leaves if not t.is_leaf(l)]
        if bad:
            problems.append(f"immersion {i + 1}: non-leaf nodes {sorted(bad)}")
            continue
        for l in im.leaves:
            if l in seen:
                problems.append(f"leaf multiply covered: {l} in immersions {seen[l] + 1} and {i + 1}")
            else:
                seen[l] = i
        real = immersion_cost(t, im.leaves)
        if real != im.cost:
            problems.append(f"immersion {i + 1}: cost {im.cost} recorded, actual {real}")
        if real > params.p:
            problems.append(f"budget exceeded: immersion {i + 1} costs {real} > p={params.p}")
    missing = [l for l in t.leaves if l not in seen]
    if missing:
        problems.append(f"leaf uncovered: {missing}")
    # every node lies on some root-to-leaf path, so covering the leaves covers T
    covered = _subtree_nodes(t, seen)
    if len(covered) != t.n:
        problems.append(f"nodes not visited: {sorted(set(t.nodes()) - covered)}")

    if claimed_total is not None and claimed_total != sol.total_distance:
        problems.append(f"total distance {claimed_total} claimed, actual {sol.total_distance}")

    if sol.assignment is not None:
        flat = [i for block in sol.assignment for i in block]
        m = len(sol.immersions)
        if sorted(flat) != list(range(m)):
            problems.append("assignment does not partition the immersions")
        if len(sol.assignment) > params.k:
            problems.append(f"assignment uses {len(sol.assignment)} agents > k={params.k}")
        if claimed_makespan is not None and all(0 <= i < m for i in flat):
            if claimed_makespan != sol.makespan:
                problems.append(f"makespan {claimed_makespan} claimed, actual {sol.makespan}")
    elif claimed_makespan is not None:
        problems.append("makespan claimed without an assignment")
    return problems


# -- solution text format ---------------------------------------------------

def format_solution(t: RootedTree, sol: CoverSolution) -> str:
    lines = []
    for i, im in enumerate(sol.immersions, start=1):
        leaves = " ".join(str(l) for l in im.ordered(t))
        lines.append(f"I{i}: {leaves} cost={im.cost}")
    if sol.assignment is not None:
        for j, block in enumerate(sol.assignment, start=1):
            time = sum(sol.immersions[i].cost for i in block)
            parts = [f"agent {j}:"] + [f"I{i + 1}" for i in block] + [f"time={time}"]
            lines.append(" ".join(parts))
    ms = sol.makespan
    lines.append(f"total={sol.total_distance} makespan={'-' if ms is None else ms}")
    return "\n".join(lines) + "\n"


class SolutionFormatError(ValueError):
    pass


@dataclass
class ParsedSolution:
    leaf_sets: List[List[int]]
    costs: List[int]
    assignment: Optional[List[List[int]]]
    total: Optional[int]
    makespan: Optional[int]

    def to_solution(self) -> CoverSolution:
        ims = [Immersion(frozenset(s), c) for s, c in zip(self.leaf_sets, self.costs)]
        return CoverSolution(ims, self.assignment)


_DIAGNOSTIC_KEYS = ("nodes_explored=", "runtime_ms=", "optimal=")


def parse_solution(text: str) -> ParsedSolution:
    sets, costs, blocks = [], [], []
    total = makespan = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(_DIAGNOSTIC_KEYS):
            continue
        try:
            if line.startswith("I"):
                label, rest = line.split(":", 1)
                if int(label[1:]) != len(sets) + 1:
                    raise SolutionFormatError(f"line {lineno}: immersions out of order")
                *leaves, cost = rest.split()
                if not cost.startswith("cost="):
                    raise SolutionFormatError(f"line {lineno}: missing cost=")
                sets.append([int(x) for x in leaves])
                costs.append(int(cost[5:]))
            elif line.startswith("agent"):
                _, rest = line.split(":", 1)
                *ids, time = rest.split()
                if not time.startswith("time="):
                    raise SolutionFormatError(f"line {lineno}: missing time=")
                blocks.append([int(x.lstrip("I")) - 1 for x in ids])
            elif line.startswith("total="):
                for part in line.split():
                    key, val = part.split("=")
                    if key == "total":
                        total = int(val)
                    elif key == "makespan":
                        makespan = None if val == "-" else int(val)
            else:
                raise SolutionFormatError(f"line {lineno}: unrecognised line {raw!r}")
        except ValueError as exc:
            if isinstance(exc, SolutionFormatError):
                raise
            raise SolutionFormatError(f"line {lineno}: malformed line {raw!r}") from None
    return ParsedSolution(sets, costs, blocks or None, total, makespan)
