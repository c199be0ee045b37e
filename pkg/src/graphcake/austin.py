"""Exact two-agent equal division: the moving-knife procedure made discrete.

`austin_cut` partitions a piece into n parts that two agents both value at
exactly 1/n of the whole, with rational arithmetic throughout. On
piecewise-constant densities the continuous knife motion reduces to root
finding on a piecewise-linear function, so the classical procedure admits an
exact finite implementation. That reduction is what this module does.

Geometry of the reduction: parameterize knife positions by the *combined*
prefix mass of the two densities. In that coordinate both agents' prefix
masses are continuous piecewise-linear functions (plateaus of either single
density stay continuous, and stretches where both densities vanish collapse
to single points), and the pairs of knife positions enclosing exactly a 1/k
share of the first agent form a connected monotone curve. The second agent's
value of the enclosed window varies continuously and piecewise-linearly along
that curve, and the k consecutive windows tiling the whole piece are points
on it whose values average to exactly 1/k of the second agent's total, so a
window both agents value at exactly 1/k exists on the curve and is found by
walking its segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cake import (
    ZERO,
    CutLog,
    Density,
    Piece,
    UNIFORM,
    density_add,
    measure,
    piece_diff,
    prefix_cut,
)


@dataclass(frozen=True)
class WindowSegment:
    """One linear stretch of the double-knife curve.

    ``a``/``b`` are the left/right knife positions in combined-mass
    coordinates; ``u`` is the second agent's measure of the enclosed window.
    """

    a0: Fraction
    b0: Fraction
    u0: Fraction
    a1: Fraction
    b1: Fraction
    u1: Fraction


@dataclass(frozen=True)
class WindowCurve:
    """The double-knife curve for splitting off a 1/k share of a piece.

    Continuous and piecewise linear; `cuts` are the combined-mass positions
    of the k consecutive first-agent tiles the walk threads through.
    """

    window_mass: Fraction  # first agent's mass enclosed by every window
    total_h: Fraction  # total combined mass of the piece
    cuts: tuple
    segments: tuple

    def first_hit(self, target: Fraction):
        """Leftmost curve point whose window value equals `target`, or None."""
        for seg in self.segments:
            if seg.u0 == target:
                return seg.a0, seg.b0
            lo, hi = min(seg.u0, seg.u1), max(seg.u0, seg.u1)
            if lo < target < hi:
                theta = (target - seg.u0) / (seg.u1 - seg.u0)
                return (
                    seg.a0 + theta * (seg.a1 - seg.a0),
                    seg.b0 + theta * (seg.b1 - seg.b0),
                )
        if self.segments:
            last = self.segments[-1]
            if last.u1 == target:
                return last.a1, last.b1
        return None


def _curve_cells(di: Density, dj: Density, s: Piece) -> list[tuple]:
    """Cells (h0, h1, share) of positive combined mass, in combined-mass
    coordinates; `share` is the first agent's fraction of the cell's mass."""
    cells = []
    h = ZERO
    for iv in s.intervals:
        bounds = sorted(
            {iv.lo, iv.hi}
            | {b for b in di.breakpoints if iv.lo < b < iv.hi}
            | {b for b in dj.breakpoints if iv.lo < b < iv.hi}
        )
        for a, b in zip(bounds, bounds[1:]):
            ((_, _, vi),) = di.segments(a, b)
            ((_, _, vj),) = dj.segments(a, b)
            width = (vi + vj) * (b - a)
            if width > 0:
                cells.append((h, h + width, vi / (vi + vj)))
                h += width
    return cells


def _phi_positions(cells: Sequence[tuple], targets: Sequence[Fraction]) -> list[Fraction]:
    # Leftmost combined-mass positions where the first agent's prefix mass
    # completes each ascending target.
    positions = []
    it = iter(targets)
    target = next(it, None)
    acc = ZERO
    for h0, h1, share in cells:
        if target is None:
            break
        cell_mass = share * (h1 - h0)
        while target is not None and acc + cell_mass >= target:
            if share == 0:
                break
            positions.append(h0 + (target - acc) / share)
            target = next(it, None)
        acc += cell_mass
    if target is not None:
        raise AssertionError("first-agent mass exhausted before all targets")
    return positions


def window_curve(di: Density, dj: Density, k: int, s: Piece) -> WindowCurve:
    """Build the double-knife curve for a 1/k split of `s`.

    Requires k >= 2 and a positive first-agent measure of `s`.
    """
    mi = measure(di, s)
    if k < 2 or mi <= 0:
        raise ValueError("curve needs k >= 2 and positive first-agent mass")
    w = mi / k
    cells = _curve_cells(di, dj, s)
    total_h = cells[-1][1]
    cuts = [ZERO] + _phi_positions(cells, [w * j for j in range(1, k)]) + [total_h]

    segments: list[WindowSegment] = []
    ia = ib = 0
    alpha, beta = cuts[0], cuts[1]

    def emit(da: Fraction, db: Fraction) -> None:
        nonlocal alpha, beta
        na, nb = alpha + da, beta + db
        segments.append(
            WindowSegment(alpha, beta, beta - alpha - w, na, nb, nb - na - w)
        )
        alpha, beta = na, nb

    for leg in range(k - 1):
        a_t, b_t = cuts[leg + 1], cuts[leg + 2]
        while alpha < a_t or beta < b_t:
            if beta < b_t:
                while cells[ib][1] <= beta:
                    ib += 1
                pb = cells[ib][2]
                if pb == 0:
                    emit(ZERO, min(cells[ib][1], b_t) - beta)
                    continue
            if alpha < a_t:
                while cells[ia][1] <= alpha:
                    ia += 1
                pa = cells[ia][2]
                if pa == 0:
                    emit(min(cells[ia][1], a_t) - alpha, ZERO)
                    continue
            # Both knives strictly inside their ranges with positive slopes;
            # they advance together keeping the first agent's window mass at w.
            assert alpha < a_t and beta < b_t
            da_cap = min(cells[ia][1], a_t) - alpha
            db_cap = min(cells[ib][1], b_t) - beta
            da = min(da_cap, db_cap * pb / pa)
            emit(da, da * pa / pb)

    return WindowCurve(
        window_mass=w, total_h=total_h, cuts=tuple(cuts), segments=tuple(segments)
    )


def exact_fraction(
    di: Density, dj: Density, k: int, s: Piece, log: CutLog | None = None
) -> Piece:
    """A sub-piece both agents value at exactly 1/k of their value of `s`.

    Degenerate masses stay total: a zero-mass agent is satisfied by any
    split, so the cut is driven by the other agent alone, or by plain
    length when both measures vanish.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return s
    mi, mj = measure(di, s), measure(dj, s)
    if mi == 0:
        driver, total = (dj, mj) if mj > 0 else (UNIFORM, s.length)
        if total == 0:
            return Piece()
        part, _ = prefix_cut(driver, s, total / k, log)
        return part

    curve = window_curve(di, dj, k, s)
    hit = curve.first_hit(mj / k)
    assert hit is not None, "window curve missed its guaranteed crossing"
    alpha, beta = hit
    combined = density_add(di, dj)
    left, _ = prefix_cut(combined, s, alpha, log)
    right, _ = prefix_cut(combined, s, beta, log)
    return piece_diff(right, left)


def austin_cut(
    di: Density, dj: Density, n: int, s: Piece, log: CutLog | None = None
) -> list[Piece]:
    """Partition `s` into n pieces each valued at exactly 1/n by both agents.

    Pieces are returned in extraction order: each round splits off one
    exactly-1/n share of the original from the shrinking remainder (a 1/k
    share of the remaining k/n fraction). Charged 2n cuts under the standard
    accounting; the log also records every knife placement actually made.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if log is not None:
        log.charge(2 * n)
    pieces = []
    rest = s
    for k in range(n, 1, -1):
        part = exact_fraction(di, dj, k, rest, log)
        pieces.append(part)
        rest = piece_diff(rest, part)
    pieces.append(rest)
    return pieces
