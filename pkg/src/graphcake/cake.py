"""Exact model of the cake: the unit interval, pieces, and piecewise-constant
valuation densities.

Every coordinate and every measure in this package is a `fractions.Fraction`;
there is no floating point anywhere. Intervals are half-open ``[lo, hi)`` so
that a collection of pieces can partition ``[0, 1)`` exactly; since densities
have no atoms, the boundary convention carries zero measure and is invisible
to all value comparisons.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class TargetExceedsMeasure(ValueError):
    """Raised when a prefix cut asks for more mass than the piece holds."""


def parse_rational(text: str) -> Fraction:
    """Parse a rational from its wire form ``"p/q"`` (bare integers allowed)."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Wire form of a rational: always ``"p/q"`` in lowest terms, q > 0."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    """A non-empty half-open subinterval ``[lo, hi)`` of the unit interval."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not (ZERO <= self.lo < self.hi <= ONE):
            raise ValueError(f"bad interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def _canonical(parts: Iterable[tuple[Fraction, Fraction]]) -> tuple[Interval, ...]:
    # Sort, drop empties, merge overlapping and adjacent intervals.
    spans = sorted((lo, hi) for lo, hi in parts if lo < hi)
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            last_lo, last_hi = merged[-1]
            merged[-1] = (last_lo, max(last_hi, hi))
        else:
            merged.append((lo, hi))
    return tuple(Interval(lo, hi) for lo, hi in merged)


class Piece:
    """A finite union of disjoint intervals, kept in canonical form.

    Canonical means: intervals sorted by left endpoint, pairwise disjoint,
    and maximal (no two adjacent intervals sharing an endpoint). The empty
    piece is valid. Construction canonicalizes, so normalizing an already
    canonical piece is the identity.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval | tuple[Fraction, Fraction]] = ()):
        parts = []
        for iv in intervals:
            if isinstance(iv, Interval):
                parts.append((iv.lo, iv.hi))
            else:
                lo, hi = iv
                parts.append((Fraction(lo), Fraction(hi)))
        object.__setattr__(self, "intervals", _canonical(parts))

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("Piece is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Piece) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __repr__(self) -> str:
        spans = " ".join(f"[{iv.lo},{iv.hi})" for iv in self.intervals)
        return f"Piece({spans})" if spans else "Piece(empty)"

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), ZERO)

    def contains(self, other: "Piece") -> bool:
        """True iff `other` is a sub-piece of this piece."""
        return piece_diff(other, self).is_empty


EMPTY = Piece()
UNIT = Piece([(ZERO, ONE)])


class Density:
    """A non-negative piecewise-constant valuation density on ``[0, 1)``.

    `breakpoints` runs from 0 to 1 strictly increasing; `values[k]` is the
    constant density on ``[breakpoints[k], breakpoints[k+1])``. The total
    mass need not be 1: fairness comparisons are relative per agent, so
    normalization is never required.
    """

    __slots__ = ("breakpoints", "values", "_cum")

    def __init__(
        self,
        breakpoints: Sequence[Fraction | int | str],
        values: Sequence[Fraction | int | str],
    ):
        bps = tuple(Fraction(b) for b in breakpoints)
        vals = tuple(Fraction(v) for v in values)
        if len(bps) < 2 or bps[0] != ZERO or bps[-1] != ONE:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bps) - 1:
            raise ValueError("need one value per breakpoint gap")
        if any(v < 0 for v in vals):
            raise ValueError("density values must be non-negative")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        # Cumulative mass at each breakpoint, so prefix masses are O(log m).
        cum = [ZERO]
        for (a, b), v in zip(zip(bps, bps[1:]), vals):
            cum.append(cum[-1] + v * (b - a))
        object.__setattr__(self, "_cum", tuple(cum))

    def __setattr__(self, name, value):
        raise AttributeError("Density is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Density)
            and self.breakpoints == other.breakpoints
            and self.values == other.values
        )

    def __repr__(self) -> str:
        segs = ", ".join(
            f"{v} on [{a},{b})"
            for (a, b), v in zip(zip(self.breakpoints, self.breakpoints[1:]), self.values)
        )
        return f"Density({segs})"

    @classmethod
    def uniform(cls, value: Fraction | int = 1) -> "Density":
        return cls((ZERO, ONE), (Fraction(value),))

    @property
    def total(self) -> Fraction:
        return self._cum[-1]

    def prefix_mass(self, x: Fraction) -> Fraction:
        """Exact mass of ``[0, x)``."""
        k = bisect_right(self.breakpoints, x) - 1
        if k >= len(self.values):
            return self._cum[-1]
        return self._cum[k] + self.values[k] * (x - self.breakpoints[k])

    def segments(self, lo: Fraction, hi: Fraction):
        """Yield ``(a, b, value)`` cells covering ``[lo, hi)`` exactly."""
        k = bisect_right(self.breakpoints, lo) - 1
        pos = lo
        while pos < hi:
            end = min(hi, self.breakpoints[k + 1])
            yield pos, end, self.values[k]
            pos = end
            k += 1


UNIFORM = Density.uniform()


def density_add(a: Density, b: Density) -> Density:
    """Pointwise sum of two densities (merged breakpoints)."""
    bps = sorted(set(a.breakpoints) | set(b.breakpoints))
    vals = []
    for lo, hi in zip(bps, bps[1:]):
        (_, _, va), = a.segments(lo, hi)
        (_, _, vb), = b.segments(lo, hi)
        vals.append(va + vb)
    return Density(bps, vals)


def measure(d: Density, s: Piece) -> Fraction:
    """Exact integral of the density over the piece."""
    return sum(
        (d.prefix_mass(iv.hi) - d.prefix_mass(iv.lo) for iv in s.intervals), ZERO
    )


@dataclass
class CutEvent:
    """One knife placement: where it landed and which protocol step made it."""

    position: Fraction
    step: str
    agent: int | None


class CutLog:
    """Cut accounting for a single protocol run.

    Records every knife placement (for the true cut count) and the per-step
    charges of the standard analysis (for the conventional count). Owned by
    exactly one run; the rest of the package is pure functions.
    """

    def __init__(self) -> None:
        self.events: list[CutEvent] = []
        self.charges: list[tuple[int, str]] = []
        self._step = ""
        self._agent: int | None = None

    def set_context(self, step: str, agent: int | None = None) -> None:
        self._step = step
        self._agent = agent

    def cut(self, position: Fraction) -> None:
        self.events.append(CutEvent(position, self._step, self._agent))

    def charge(self, amount: int) -> None:
        self.charges.append((amount, self._step))

    @property
    def true_count(self) -> int:
        return len(self.events)

    @property
    def paper_count(self) -> int:
        return sum(amount for amount, _ in self.charges)


def _cut_positions(
    d: Density, s: Piece, targets: Sequence[Fraction]
) -> list[Fraction]:
    # One left-to-right sweep; targets must be ascending and within (0, total].
    # Each position is the leftmost point whose prefix of `s` has that mass.
    positions: list[Fraction] = []
    it = iter(targets)
    target = next(it, None)
    acc = ZERO
    for iv in s.intervals:
        if target is None:
            break
        for a, b, v in d.segments(iv.lo, iv.hi):
            cell_mass = v * (b - a)
            while target is not None and acc + cell_mass >= target:
                if v == 0:
                    break  # zero cell cannot complete a strictly larger target
                positions.append(a + (target - acc) / v)
                target = next(it, None)
            if target is None:
                break
            acc += cell_mass
    if target is not None:
        raise TargetExceedsMeasure(
            f"target {target} exceeds piece measure {measure(d, s)}"
        )
    return positions


def _split_at(s: Piece, positions: Sequence[Fraction]) -> list[Piece]:
    """Split a piece at ascending positions into len(positions)+1 pieces."""
    pieces: list[Piece] = []
    current: list[tuple[Fraction, Fraction]] = []
    idx = 0
    for iv in s.intervals:
        lo = iv.lo
        while idx < len(positions) and positions[idx] <= iv.hi:
            x = positions[idx]
            if lo < x:
                current.append((lo, x))
            pieces.append(Piece(current))
            current = []
            lo = max(lo, x)
            idx += 1
        if lo < iv.hi:
            current.append((lo, iv.hi))
    while idx < len(positions):  # positions at/after the end of material
        pieces.append(Piece(current))
        current = []
        idx += 1
    pieces.append(Piece(current))
    return pieces


def prefix_cut(
    d: Density, s: Piece, t: Fraction, log: CutLog | None = None
) -> tuple[Piece, Piece]:
    """Cut off the leftmost sub-piece of `s` holding exactly mass `t`.

    Returns ``(prefix, rest)``: an exact two-part partition of `s` with
    ``measure(d, prefix) == t``. When zero-density stretches make several cut
    points valid, the leftmost one is used, so the prefix is as short as
    possible. Raises TargetExceedsMeasure if `t` is more than the piece holds.
    """
    if t < 0:
        raise ValueError("cut target must be non-negative")
    if t == 0:
        return EMPTY, s
    positions = _cut_positions(d, s, [t])
    left, right = _split_at(s, positions)
    if log is not None and t < measure(d, s):
        log.cut(positions[0])
    return left, right


def equal_split(d: Density, s: Piece, k: int, log: CutLog | None = None) -> list[Piece]:
    """Split `s` into `k` pieces of equal measure, left to right.

    Every piece has measure exactly ``measure(d, s) / k``. If the piece has
    zero mass under `d`, the split falls back to k parts of equal length so
    the operation stays total (any split of a zero-mass piece preserves all
    value equalities).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return [s]
    total = measure(d, s)
    if total == 0:
        d, total = UNIFORM, s.length
        if total == 0:
            return [s] + [EMPTY] * (k - 1)
    targets = [total * j / k for j in range(1, k)]
    positions = _cut_positions(d, s, targets)
    if log is not None:
        for x in positions:
            log.cut(x)
    return _split_at(s, positions)


def piece_union(a: Piece, b: Piece) -> Piece:
    """Exact set union, canonical output."""
    return Piece(list(a.intervals) + list(b.intervals))


def piece_intersect(a: Piece, b: Piece) -> Piece:
    """Exact set intersection, canonical output."""
    out = []
    for x in a.intervals:
        for y in b.intervals:
            lo, hi = max(x.lo, y.lo), min(x.hi, y.hi)
            if lo < hi:
                out.append((lo, hi))
    return Piece(out)


def piece_diff(a: Piece, b: Piece) -> Piece:
    """Exact set difference ``a \\ b``, canonical output."""
    out = []
    for x in a.intervals:
        lo = x.lo
        for y in b.intervals:
            if y.hi <= lo:
                continue
            if y.lo >= x.hi:
                break
            if lo < y.lo:
                out.append((lo, y.lo))
            lo = max(lo, y.hi)
            if lo >= x.hi:
                break
        if lo < x.hi:
            out.append((lo, x.hi))
    return Piece(out)


def piece_to_pairs(s: Piece) -> list[list[str]]:
    """Wire form of a piece: array of ``["lo", "hi"]`` rational pairs."""
    return [[format_rational(iv.lo), format_rational(iv.hi)] for iv in s.intervals]


def piece_from_pairs(pairs: Iterable[Sequence[str]]) -> Piece:
    return Piece([(parse_rational(lo), parse_rational(hi)) for lo, hi in pairs])
