"""Rooted trees, fairness graphs, and the slice-count function.

Vertices are ids ``0..n-1``. A tree's depth ``d(v)`` counts edges to the
root (so the root has depth 0) and ``d`` is the maximum depth. Children
lists keep the order vertices first appear in the parent array; every
iteration tie-break in the protocols derives from that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence


class MalformedTree(ValueError):
    """Parent array does not encode a single rooted tree."""


class NonIntegral(ArithmeticError):
    """Slice-count arithmetic produced a non-integer (an internal bug)."""


@dataclass(frozen=True)
class RootedTree:
    n: int
    root: int
    parent: tuple  # parent[v] is None for the root
    children: tuple  # children[v]: tuple of child ids in input order
    depth: tuple  # edges from v to the root
    subtree_size: tuple  # number of vertices in the subtree rooted at v
    tree_depth: int  # max depth

    def subtree_vertices(self, v: int) -> list[int]:
        """All vertices of the subtree rooted at v, preorder."""
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def ancestors(self, v: int) -> list[int]:
        """Strict ancestors of v, nearest first."""
        out = []
        u = self.parent[v]
        while u is not None:
            out.append(u)
            u = self.parent[u]
        return out


def tree_from_parent_list(parents: Sequence[int | None]) -> RootedTree:
    """Build a RootedTree from a parent array with exactly one None root."""
    n = len(parents)
    if n == 0:
        raise MalformedTree("empty parent list")
    roots = [v for v, p in enumerate(parents) if p is None]
    if len(roots) != 1:
        raise MalformedTree(f"need exactly one root, found {len(roots)}")
    root = roots[0]
    children: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parents):
        if p is None:
            continue
        if not isinstance(p, int) or not (0 <= p < n):
            raise MalformedTree(f"vertex {v} has bad parent {p!r}")
        if p == v:
            raise MalformedTree(f"vertex {v} is its own parent")
        children[p].append(v)

    depth = [-1] * n
    depth[root] = 0
    stack = [root]
    seen = 1
    while stack:
        u = stack.pop()
        for c in children[u]:
            depth[c] = depth[u] + 1
            seen += 1
            stack.append(c)
    if seen != n or any(d < 0 for d in depth):
        raise MalformedTree("parent links contain a cycle or unreachable vertices")

    size = [1] * n
    for v in sorted(range(n), key=depth.__getitem__, reverse=True):
        p = parents[v]
        if p is not None:
            size[p] += size[v]

    return RootedTree(
        n=n,
        root=root,
        parent=tuple(parents),
        children=tuple(tuple(cs) for cs in children),
        depth=tuple(depth),
        subtree_size=tuple(size),
        tree_depth=max(depth),
    )


@dataclass(frozen=True)
class FairnessGraph:
    """Undirected simple graph over the agents; fairness is checked per edge."""

    n: int
    neighbors: tuple  # neighbors[v]: frozenset of adjacent vertices

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "FairnessGraph":
        adj = [set() for _ in range(n)]
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range")
            if i == j:
                raise ValueError(f"self-loop at {i}")
            adj[i].add(j)
            adj[j].add(i)
        return cls(n=n, neighbors=tuple(frozenset(a) for a in adj))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in sorted(self.neighbors[i]) if i < j]

    def is_subgraph_of(self, other: "FairnessGraph") -> bool:
        return self.n == other.n and all(
            self.neighbors[v] <= other.neighbors[v] for v in range(self.n)
        )


def tree_graph(tree: RootedTree) -> FairnessGraph:
    """The tree's own edges as a fairness graph."""
    edges = [(v, p) for v, p in enumerate(tree.parent) if p is not None]
    return FairnessGraph.from_edges(tree.n, edges)


def descendant_closure(tree: RootedTree) -> FairnessGraph:
    """Connect every strict ancestor-descendant pair of the tree."""
    edges = []
    for v in range(tree.n):
        for a in tree.ancestors(v):
            edges.append((a, v))
    return FairnessGraph.from_edges(tree.n, edges)


def f_value(tree: RootedTree, v: int) -> int:
    """Slice count for vertex v: ``(d(v) + |T(v)|) / (d(v) + 1) * d!``.

    Exact integer; the root gets ``n * d!`` and every leaf gets ``d!``.
    """
    dv = tree.depth[v]
    num = (dv + tree.subtree_size[v]) * factorial(tree.tree_depth)
    den = dv + 1
    q, r = divmod(num, den)
    if r != 0:
        raise NonIntegral(f"slice count for vertex {v} is {num}/{den}")
    return q


def depth_factorial(tree: RootedTree) -> int:
    """d! — the slice count every vertex ends up holding."""
    return factorial(tree.tree_depth)
