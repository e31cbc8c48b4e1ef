"""Rooted trees with integer edge lengths.

A tree is read from / written to a small text format::

    n root
    parent child length      # n-1 lines

Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple


class TreeError(ValueError):
    """Invalid tree structure or malformed tree file."""

    def __init__(self, message: str, line: Optional[int] = None, node: Optional[int] = None):
        self.line = line
        self.node = node
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleInstance(ValueError):
    """Raised when p < 2h, so some leaf cannot be reached and brought back."""


Edge = Tuple[int, int, int]


class RootedTree:
    """Immutable rooted tree on nodes 1..n.

    Children are kept in ascending id order, which fixes the depth-first
    leaf order used by the heuristics.
    """

    __slots__ = ("n", "root", "_parent", "_length", "_children", "_depth",
                 "_level", "_leaves", "_leaf_index", "_preorder")

    def __init__(self, n: int, root: int, edges: Iterable[Edge]):
        if n < 1:
            raise TreeError(f"node count must be >= 1, got {n}")
        if not 1 <= root <= n:
            raise TreeError(f"root {root} out of range 1..{n}")
        self.n = n
        self.root = root
        parent: Dict[int, int] = {}
        length: Dict[int, int] = {}
        for u, v, w in edges:
            _check_edge(n, root, u, v, w, parent)
            parent[v] = u
            length[v] = w
        if len(parent) != n - 1:
            missing = [v for v in range(1, n + 1) if v != root and v not in parent]
            raise TreeError(f"disconnected node {missing[0]}", node=missing[0])
        children: Dict[int, List[int]] = {v: [] for v in range(1, n + 1)}
        for v, u in parent.items():
            children[u].append(v)
        for c in children.values():
            c.sort()

        # iterative preorder; anything unreached sits on a cycle
        depth = {root: 0}
        level = {root: 0}
        preorder = []
        stack = [root]
        while stack:
            u = stack.pop()
            preorder.append(u)
            for v in reversed(children[u]):
                depth[v] = depth[u] + length[v]
                level[v] = level[u] + 1
                stack.append(v)
        if len(preorder) != n:
            bad = min(v for v in range(1, n + 1) if v not in depth)
            raise TreeError(f"cycle through node {bad}", node=bad)

        self._parent = parent
        self._length = length
        self._children = {u: tuple(c) for u, c in children.items()}
        self._depth = depth
        self._level = level
        self._preorder = tuple(preorder)
        self._leaves = tuple(v for v in preorder if v != root and not children[v])
        self._leaf_index = {l: i for i, l in enumerate(self._leaves)}

    # -- basic accessors ---------------------------------------------------
    def parent(self, v: int) -> Optional[int]:
        return self._parent.get(v)

    def children(self, v: int) -> Tuple[int, ...]:
        return self._children[v]

    def edge_length(self, v: int) -> int:
        """Length of the edge joining ``v`` to its parent."""
        return self._length[v]

    def depth(self, v: int) -> int:
        return self._depth[v]

    def nodes(self) -> range:
        return range(1, self.n + 1)

    def edges(self) -> List[Edge]:
        """Edges as ``(parent, child, length)`` in preorder of the child."""
        return [(self._parent[v], v, self._length[v]) for v in self._preorder if v != self.root]

    @property
    def leaves(self) -> Tuple[int, ...]:
        return self._leaves

    @property
    def preorder(self) -> Tuple[int, ...]:
        return self._preorder

    def is_leaf(self, v: int) -> bool:
        return v in self._leaf_index

    def leaf_index(self, leaf: int) -> int:
        """Position of ``leaf`` in the DFS leaf order."""
        return self._leaf_index[leaf]

    def is_unit(self) -> bool:
        return all(w == 1 for w in self._length.values())

    def path_to_root(self, v: int) -> List[int]:
        """Nodes from ``v`` up to, but excluding, the root."""
        self._check_node(v)
        out = []
        while v != self.root:
            out.append(v)
            v = self._parent[v]
        return out

    def _check_node(self, v: int) -> None:
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise KeyError(f"unknown node {v!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return (self.n, self.root, self._parent, self._length) == (
            other.n, other.root, other._parent, other._length)

    def __hash__(self) -> int:
        return hash((self.n, self.root, tuple(sorted(self._parent.items()))))

    def __repr__(self) -> str:
        return f"RootedTree(n={self.n}, root={self.root}, leaves={len(self._leaves)})"


def _check_edge(n, root, u, v, w, parent, line=None):
    for x in (u, v):
        if not 1 <= x <= n:
            raise TreeError(f"node id {x} out of range 1..{n}", line)
    if w < 1:
        raise TreeError(f"non-positive edge length {w}", line)
    if u == v:
        raise TreeError(f"self loop at node {u}", line)
    if v == root:
        raise TreeError(f"root {root} cannot be a child", line)
    if v in parent:
        raise TreeError(f"duplicate child {v}", line)


@dataclass(frozen=True)
class InstanceParams:
    p: int
    k: int = 1


def parse_tree(text: str) -> RootedTree:
    """Parse the tree file format. Errors carry the offending line number."""
    header = None
    edges: List[Edge] = []
    edge_lines: Dict[int, int] = {}
    parent: Dict[int, int] = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise TreeError(f"malformed line {raw!r}", lineno) from None
        if header is None:
            if len(nums) != 2:
                raise TreeError("header must be 'n root'", lineno)
            header = nums
            if header[0] < 1:
                raise TreeError(f"node count must be >= 1, got {header[0]}", lineno)
            if not 1 <= header[1] <= header[0]:
                raise TreeError(f"root {header[1]} out of range 1..{header[0]}", lineno)
            continue
        if len(nums) != 3:
            raise TreeError("edge line must be 'parent child length'", lineno)
        n, root = header
        if len(edges) == n - 1:
            raise TreeError(f"more than {n - 1} edge lines", lineno)
        u, v, w = nums
        _check_edge(n, root, u, v, w, parent, lineno)
        parent[v] = u
        edge_lines[v] = lineno
        edges.append((u, v, w))
    if header is None:
        raise TreeError("empty tree file", 1)
    n, root = header
    try:
        return RootedTree(n, root, edges)
    except TreeError as exc:
        # map structural errors back onto a line of the file
        line = edge_lines.get(exc.node, last_line or 1)
        raise TreeError(str(exc), line, exc.node) from None


def serialize_tree(t: RootedTree) -> str:
    lines = [f"{t.n} {t.root}"]
    lines += [f"{u} {v} {w}" for u, v, w in t.edges()]
    return "\n".join(lines) + "\n"


def height(t: RootedTree) -> int:
    return max(t.depth(v) for v in t.nodes())


def node_distance(t: RootedTree, u: int, v: int) -> int:
    """Weighted path length between two nodes."""
    t._check_node(u)
    t._check_node(v)
    a, b = u, v
    while t._level[a] > t._level[b]:
        a = t._parent[a]
    while t._level[b] > t._level[a]:
        b = t._parent[b]
    while a != b:
        a = t._parent[a]
        b = t._parent[b]
    return t.depth(u) + t.depth(v) - 2 * t.depth(a)


def dfs_leaf_order(t: RootedTree) -> List[int]:
    return list(t.leaves)


def random_tree(n: int, seed: Optional[int] = None) -> RootedTree:
    """Random recursive tree: attach each node of S to a uniform node of V.

    Starts from V={1}, S={2..n}; every step draws v from V and w from S
    uniformly, adds the unit edge (v, w) and moves w into V. Node 1 is the root.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = random.Random(seed)
    inside = [1]
    outside = list(range(2, n + 1))
    edges = []
    while outside:
        v = inside[rng.randrange(len(inside))]
        w = outside.pop(rng.randrange(len(outside)))
        edges.append((v, w, 1))
        inside.append(w)
    return RootedTree(n, 1, edges)


def validate_instance(t: RootedTree, params: InstanceParams) -> List[str]:
    """Return the list of violations; empty means the instance is feasible."""
    problems = []
    h = height(t)
    if params.p < 2 * h:
        problems.append(f"p < 2h (p={params.p}, 2h={2 * h})")
    if params.k < 1:
        problems.append(f"k < 1 (k={params.k})")
    return problems


def require_feasible(t: RootedTree, p: int) -> None:
    problems = validate_instance(t, InstanceParams(p, 1))
    if problems:
        raise InfeasibleInstance("; ".join(problems))
