"""The two allocation protocols.

`allocation_tree` produces an envy-free allocation on the tree itself: the
root splits the cake into n equal shares by her own measure, children pick
bundles top-down, and every child's bundle is re-divided between child and
parent by the exact two-agent procedure before recursing.

`alg_descendant` produces a proportional allocation on the tree's
ancestor-descendant closure: processed top-down, each vertex merges what it
holds, cuts it into its slice count of equal pieces, and lets every proper
descendant take its quota of the best remaining pieces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .austin import austin_cut
from .cake import UNIT, CutLog, Density, Piece, equal_split, measure, piece_union
from .graph import RootedTree, depth_factorial, f_value


class NotEnoughPieces(ValueError):
    """Asked to pick more pieces than remain available."""


@dataclass
class Allocation:
    """Result of a protocol run.

    `pieces` holds each vertex's final bundle merged to canonical form;
    `final_slices` keeps the same bundles as the uncut slices actually held,
    since merging destroys slice counts. `slice_ledger` records every slice
    received from an ancestor (descendant protocol only).
    """

    n: int
    protocol: str
    pieces: dict = field(default_factory=dict)
    cut_log: CutLog = field(default_factory=CutLog)
    slice_ledger: dict = field(default_factory=dict)
    final_slices: dict = field(default_factory=dict)

    @property
    def cuts_true(self) -> int:
        return self.cut_log.true_count

    @property
    def cuts_paper(self) -> int:
        return self.cut_log.paper_count


def pick_top(d: Density, candidates: Sequence[Piece], m: int) -> list[int]:
    """Indices of the m candidates the agent values highest.

    Ties break toward the lower index; the result is in ascending index
    order. Raises NotEnoughPieces if fewer than m candidates exist.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if m > len(candidates):
        raise NotEnoughPieces(f"asked for {m} of {len(candidates)} pieces")
    ranked = sorted(range(len(candidates)), key=lambda i: (-measure(d, candidates[i]), i))
    return sorted(ranked[:m])


def _leftmost_key(p: Piece) -> tuple:
    return (1,) if p.is_empty else (0, p.intervals[0].lo)


def allocation_tree(tree: RootedTree, densities: Sequence[Density]) -> Allocation:
    """Envy-free-on-the-tree allocation, exact.

    The root receives exactly a 1/n share by her own measure; along every
    tree edge neither endpoint values the other's bundle above its own.
    """
    if len(densities) != tree.n:
        raise ValueError("need one density per vertex")
    alloc = Allocation(n=tree.n, protocol="tree")
    log = alloc.cut_log

    log.set_context("initial-split", tree.root)
    log.charge(tree.n - 1)
    shares = equal_split(densities[tree.root], UNIT, tree.n, log)

    def descend(subroot: int, pieces: list[Piece]) -> None:
        remaining = list(enumerate(pieces))
        bundles: list[tuple[int, Piece]] = []
        for child in tree.children[subroot]:
            want = tree.subtree_size[child]
            chosen = pick_top(densities[child], [p for _, p in remaining], want)
            picked = [remaining[i] for i in chosen]
            remaining = [entry for i, entry in enumerate(remaining) if i not in set(chosen)]
            bundle = Piece()
            for _, p in picked:
                bundle = piece_union(bundle, p)
            bundles.append((child, bundle))
        ((_, own),) = remaining
        alloc.pieces[subroot] = own
        alloc.final_slices[subroot] = [own]
        for child, bundle in bundles:
            log.set_context(f"redivide:{child}", child)
            parts = austin_cut(
                densities[child], densities[subroot], tree.subtree_size[child], bundle, log
            )
            parts.sort(key=_leftmost_key)
            descend(child, parts)

    descend(tree.root, shares)
    return alloc


def alg_descendant(tree: RootedTree, densities: Sequence[Density]) -> Allocation:
    """Proportional-on-the-descendant-closure allocation, exact.

    Vertices are processed in increasing depth (ties by id). Each vertex
    merges its current slices, cuts the result into f(v) equal pieces by its
    own measure, and every proper descendant w takes f(w)/d(w) best remaining
    pieces, again in increasing depth (ties by id).
    """
    if len(densities) != tree.n:
        raise ValueError("need one density per vertex")
    alloc = Allocation(n=tree.n, protocol="descendant")
    log = alloc.cut_log
    dfact = depth_factorial(tree)

    holdings: dict[int, list[Piece]] = {v: [] for v in range(tree.n)}
    holdings[tree.root] = [UNIT]
    alloc.slice_ledger = {v: [] for v in range(tree.n)}

    by_depth = sorted(range(tree.n), key=lambda v: (tree.depth[v], v))
    for u in by_depth:
        merged = Piece()
        for slice_ in holdings[u]:
            merged = piece_union(merged, slice_)
        fu = f_value(tree, u)
        log.set_context(f"cut-phase:{u}", u)
        log.charge(fu)
        parts = equal_split(densities[u], merged, fu, log)

        remaining = list(parts)
        takers = sorted(
            (v for v in tree.subtree_vertices(u) if v != u),
            key=lambda v: (tree.depth[v], v),
        )
        for v in takers:
            quota, rem = divmod(f_value(tree, v), tree.depth[v])
            assert rem == 0, "slice quota must be integral"
            chosen = set(pick_top(densities[v], remaining, quota))
            for i in chosen:
                holdings[v].append(remaining[i])
                alloc.slice_ledger[v].append((u, remaining[i]))
            remaining = [p for i, p in enumerate(remaining) if i not in chosen]
        holdings[u] = remaining
        assert len(remaining) == dfact, "kept slices must number d!"

    for v in range(tree.n):
        merged = Piece()
        for slice_ in holdings[v]:
            merged = piece_union(merged, slice_)
        alloc.pieces[v] = merged
        alloc.final_slices[v] = holdings[v]
    return alloc
