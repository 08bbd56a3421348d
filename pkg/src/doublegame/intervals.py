"""Closed rational intervals and exact solutions of affine inequalities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lo, hi]``; empty when ``lo > hi``."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def empty(cls) -> Interval:
        return cls(ONE, ZERO)

    @classmethod
    def unit(cls) -> Interval:
        return cls(ZERO, ONE)

    @classmethod
    def point(cls, x) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __and__(self, other: Interval) -> Interval:
        if self.is_empty or other.is_empty:
            return Interval.empty()
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else Interval.empty()

    def endpoints(self) -> tuple[Fraction, ...]:
        if self.is_empty:
            return ()
        if self.is_point:
            return (self.lo,)
        return (self.lo, self.hi)

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        return f"[{self.lo}, {self.hi}]"


def solve_affine(offset, slope, relation: str, domain: Interval | None = None) -> Interval:
    """Solve ``offset + slope * x  <relation>  0`` for ``x`` inside ``domain``.

    ``relation`` is one of ``">="``, ``"<="`` or ``"=="``.  The domain
    defaults to the unit interval.
    """
    domain = Interval.unit() if domain is None else domain
    offset, slope = Fraction(offset), Fraction(slope)
    if relation == "<=":
        offset, slope, relation = -offset, -slope, ">="
    if relation == "==":
        if slope == 0:
            return domain if offset == 0 else Interval.empty()
        return domain & Interval.point(-offset / slope)
    if relation != ">=":
        raise ValueError(f"unknown relation {relation!r}")
    if slope == 0:
        return domain if offset >= 0 else Interval.empty()
    root = -offset / slope
    if slope > 0:
        return domain & Interval(root, max(root, domain.hi))
    return domain & Interval(min(root, domain.lo), root)
