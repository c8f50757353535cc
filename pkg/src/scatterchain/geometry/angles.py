"""Finite unions of open angular intervals on the circle."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

Interval = tuple[float, float]


def wrap_angle(theta: float) -> float:
    """Reduce *theta* into ``[0, 2π)``."""
    wrapped = math.fmod(theta, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def signed_angle(theta: float) -> float:
    """Reduce *theta* into ``(-π, π]``."""
    wrapped = wrap_angle(theta)
    return wrapped - TWO_PI if wrapped > math.pi else wrapped


def _split(lo: float, hi: float) -> list[Interval]:
    if hi - lo >= TWO_PI:
        return [(0.0, TWO_PI)]
    start = wrap_angle(lo)
    end = start + (hi - lo)
    if end <= TWO_PI:
        return [(start, end)]
    return [(start, TWO_PI), (0.0, end - TWO_PI)]


def _merge(pieces: Iterable[Interval], slack: float) -> tuple[Interval, ...]:
    ordered = sorted(p for p in pieces if p[1] - p[0] > 0.0)
    merged: list[list[float]] = []
    for lo, hi in ordered:
        if merged and lo <= merged[-1][1] + slack:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, min(hi, TWO_PI)) for lo, hi in merged)


@dataclass(frozen=True)
class AngularIntervalSet:
    """Normalized union of open intervals of ``[0, 2π)``.

    Intervals are sorted, pairwise disjoint and separated by more than
    ``slack``. An interval crossing zero is stored as two pieces, one ending
    at 2π and one starting at 0.
    """

    intervals: tuple[Interval, ...] = ()
    slack: float = 1e-9

    @classmethod
    def from_intervals(
        cls, intervals: Iterable[Interval], *, slack: float = 1e-9
    ) -> AngularIntervalSet:
        pieces: list[Interval] = []
        for lo, hi in intervals:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"Interval ({lo}, {hi}) is not finite.")
            if hi <= lo:
                raise ValueError(f"Interval ({lo}, {hi}) has non-positive length.")
            pieces.extend(_split(lo, hi))
        return cls(_merge(pieces, slack), slack)

    @classmethod
    def empty(cls, *, slack: float = 1e-9) -> AngularIntervalSet:
        return cls((), slack)

    @classmethod
    def full(cls, *, slack: float = 1e-9) -> AngularIntervalSet:
        return cls(((0.0, TWO_PI),), slack)

    # -- queries ------------------------------------------------------------

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    @property
    def measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def __contains__(self, theta: object) -> bool:
        if not isinstance(theta, (int, float)):
            return False
        t = wrap_angle(float(theta))
        for lo, hi in self.intervals:
            if lo < t < hi:
                return True
            # zero is interior when the set wraps across it
            if t == 0.0 and lo == 0.0 and self._wraps():
                return True
        return False

    def _wraps(self) -> bool:
        return (
            len(self.intervals) > 0
            and self.intervals[0][0] <= self.slack
            and self.intervals[-1][1] >= TWO_PI - self.slack
        )

    def contains_interval(self, lo: float, hi: float) -> bool:
        """True when the closed arc ``[lo, hi]`` lies inside the set."""
        inner = AngularIntervalSet.from_intervals([(lo, hi)], slack=self.slack)
        return inner.difference(self).measure <= self.slack

    # -- algebra ------------------------------------------------------------

    def union(self, other: AngularIntervalSet) -> AngularIntervalSet:
        return AngularIntervalSet(_merge([*self.intervals, *other.intervals], self.slack), self.slack)

    def complement(self) -> AngularIntervalSet:
        gaps: list[Interval] = []
        cursor = 0.0
        for lo, hi in self.intervals:
            if lo - cursor > self.slack:
                gaps.append((cursor, lo))
            cursor = hi
        if TWO_PI - cursor > self.slack:
            gaps.append((cursor, TWO_PI))
        return AngularIntervalSet(tuple(gaps), self.slack)

    def intersection(self, other: AngularIntervalSet) -> AngularIntervalSet:
        return self.complement().union(other.complement()).complement()

    def difference(self, other: AngularIntervalSet) -> AngularIntervalSet:
        return self.intersection(other.complement())

    def symmetric_difference_measure(self, other: AngularIntervalSet) -> float:
        return self.difference(other).measure + other.difference(self).measure

    def covers_circle(self, tolerance: float = 1e-6) -> bool:
        return self.complement().measure < tolerance

    def largest_interval(self) -> Interval | None:
        """Longest piece, joined across zero; the upper end may exceed 2π."""
        if not self.intervals:
            return None
        pieces = list(self.intervals)
        if len(pieces) > 1 and self._wraps():
            first = pieces.pop(0)
            last = pieces.pop()
            pieces.append((last[0], TWO_PI + first[1]))
        return max(pieces, key=lambda p: p[1] - p[0])

    def midpoint_of_largest(self) -> float | None:
        piece = self.largest_interval()
        if piece is None:
            return None
        return wrap_angle(0.5 * (piece[0] + piece[1]))
