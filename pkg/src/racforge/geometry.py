"""Exact rational geometry: points, segments and the predicates built on them.

Coordinates are :class:`fractions.Fraction` values, so every predicate is
decided exactly.  Floating point only appears in :func:`angle_degrees`, which
is used for reporting and never for a validity verdict.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: silently converting them would smuggle rounding into
    the exact path.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coordinate")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            q = int(den)
            if q == 0:
                raise ValueError("zero denominator")
            return Fraction(int(num), q)
        return Fraction(int(num))
    except ValueError as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Serialize as ``"p/q"`` in lowest terms, or ``"p"`` for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: RationalLike, y: RationalLike) -> "Point":
        return cls(as_rational(x), as_rational(y))

    def __sub__(self, other):  # type: ignore[override]
        return (self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints coincide")

    @classmethod
    def of(cls, ax, ay, bx, by) -> "Segment":
        return cls(Point.of(ax, ay), Point.of(bx, by))

    @property
    def direction(self):
        return (self.b.x - self.a.x, self.b.y - self.a.y)


def cross(p: Point, q: Point, r: Point) -> Fraction:
    """(q - p) x (r - p)."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orientation(p: Point, q: Point, r: Point) -> int:
    """+1 for a counterclockwise turn p->q->r, -1 clockwise, 0 collinear."""
    return _sign(cross(p, q, r))


def on_segment(p: Point, s: Segment) -> bool:
    """True if ``p`` lies on the closed segment ``s``."""
    if orientation(s.a, s.b, p) != 0:
        return False
    return (min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
            and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y))


class Kind(enum.Enum):
    PROPER_CROSSING = "proper-crossing"
    ENDPOINT_TOUCH = "endpoint-touch"
    COLLINEAR_OVERLAP = "collinear-overlap"
    DISJOINT = "disjoint"


class Intersection(NamedTuple):
    kind: Kind
    point: Optional[Point] = None


def line_intersection(s1: Segment, s2: Segment) -> Point:
    """Intersection of the supporting lines; caller guarantees they are not parallel."""
    d1x, d1y = s1.direction
    d2x, d2y = s2.direction
    denom = d1x * d2y - d1y * d2x
    t = ((s2.a.x - s1.a.x) * d2y - (s2.a.y - s1.a.y) * d2x) / denom
    return Point(s1.a.x + t * d1x, s1.a.y + t * d1y)


def intersect(s1: Segment, s2: Segment) -> Intersection:
    """Classify how two closed segments meet.

    A single shared point that is an endpoint of either segment is an
    ``ENDPOINT_TOUCH`` (the point is returned).  Overlap in more than one point
    is ``COLLINEAR_OVERLAP``; a collinear pair meeting in exactly one endpoint
    is a touch.
    """
    o1 = orientation(s1.a, s1.b, s2.a)
    o2 = orientation(s1.a, s1.b, s2.b)
    o3 = orientation(s2.a, s2.b, s1.a)
    o4 = orientation(s2.a, s2.b, s1.b)

    if o1 == o2 == o3 == o4 == 0:
        # collinear: project on the dominant axis
        if s1.a.x != s1.b.x:
            key = lambda p: p.x  # noqa: E731
        else:
            key = lambda p: p.y  # noqa: E731
        lo1, hi1 = sorted((s1.a, s1.b), key=key)
        lo2, hi2 = sorted((s2.a, s2.b), key=key)
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) < key(hi):
            return Intersection(Kind.COLLINEAR_OVERLAP)
        if key(lo) == key(hi):
            return Intersection(Kind.ENDPOINT_TOUCH, lo)
        return Intersection(Kind.DISJOINT)

    if o1 * o2 < 0 and o3 * o4 < 0:
        return Intersection(Kind.PROPER_CROSSING, line_intersection(s1, s2))

    if o1 == 0 and on_segment(s2.a, s1):
        return Intersection(Kind.ENDPOINT_TOUCH, s2.a)
    if o2 == 0 and on_segment(s2.b, s1):
        return Intersection(Kind.ENDPOINT_TOUCH, s2.b)
    if o3 == 0 and on_segment(s1.a, s2):
        return Intersection(Kind.ENDPOINT_TOUCH, s1.a)
    if o4 == 0 and on_segment(s1.b, s2):
        return Intersection(Kind.ENDPOINT_TOUCH, s1.b)
    return Intersection(Kind.DISJOINT)


def dot(s1: Segment, s2: Segment) -> Fraction:
    d1x, d1y = s1.direction
    d2x, d2y = s2.direction
    return d1x * d2x + d1y * d2y


def is_perpendicular(s1: Segment, s2: Segment) -> bool:
    return dot(s1, s2) == 0


def angle_degrees(s1: Segment, s2: Segment) -> float:
    """Acute (or right) angle between the supporting lines, in degrees."""
    d1x, d1y = (float(v) for v in s1.direction)
    d2x, d2y = (float(v) for v in s2.direction)
    # atan2 of |cross| and |dot| is well conditioned near 0 and 90 degrees
    c = abs(d1x * d2y - d1y * d2x)
    d = abs(d1x * d2x + d1y * d2y)
    return math.degrees(math.atan2(c, d))
