import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racforge.geometry import (Kind, Point, Segment, angle_degrees, format_rational, intersect,
                               is_perpendicular, orientation, parse_rational)


def P(x, y):
    return Point.of(x, y)


def S(ax, ay, bx, by):
    return Segment.of(ax, ay, bx, by)


@pytest.mark.parametrize("pts, expected", [
    (((0, 0), (1, 0), (0, 1)), 1),
    (((0, 0), (1, 1), (2, 2)), 0),
    (((0, 0), (0, 1), (1, 0)), -1),
])
def test_orientation_examples(pts, expected):
    assert orientation(*(P(*p) for p in pts)) == expected


def test_intersect_examples():
    r = intersect(S(0, 0, 2, 0), S(1, -1, 1, 1))
    assert r.kind is Kind.PROPER_CROSSING
    assert r.point == P(1, 0)
    assert intersect(S(0, 0, 1, 0), S(1, 0, 2, 1)).kind is Kind.ENDPOINT_TOUCH
    assert intersect(S(0, 0, 2, 0), S(1, 0, 3, 0)).kind is Kind.COLLINEAR_OVERLAP
    assert intersect(S(0, 0, 1, 0), S(0, 1, 1, 1)).kind is Kind.DISJOINT


def test_intersection_point_is_exact():
    r = intersect(S(0, 0, 3, 1), S(0, 1, 1, 0))
    assert r.point == Point(Fraction(3, 4), Fraction(1, 4))


def test_collinear_touch_at_single_point():
    r = intersect(S(0, 0, 1, 1), S(1, 1, 3, 3))
    assert r.kind is Kind.ENDPOINT_TOUCH and r.point == P(1, 1)


def test_t_junction_is_a_touch():
    # endpoint of one segment in the interior of the other
    r = intersect(S(0, 0, 2, 0), S(1, 0, 1, 5))
    assert r.kind is Kind.ENDPOINT_TOUCH and r.point == P(1, 0)


@pytest.mark.parametrize("s1, s2, expected", [
    ((0, 0, 1, 0), (0, 0, 0, 1), True),
    ((0, 0, 1, 1), (0, 1, 1, 0), True),
    ((0, 0, 1, 1), (0, 0, 2, 1), False),
])
def test_is_perpendicular_examples(s1, s2, expected):
    assert is_perpendicular(S(*s1), S(*s2)) is expected


def test_angle_examples():
    assert angle_degrees(S(0, 0, 1, 0), S(0, 0, 0, 1)) == 90.0
    assert angle_degrees(S(0, 0, 1, 0), S(0, 0, 1, 1)) == pytest.approx(45.0, abs=1e-12)
    # slopes 1 and 1/2: tan(theta) = (1 - 1/2) / (1 + 1/2) = 1/3
    assert angle_degrees(S(0, 0, 1, 1), S(0, 0, 2, 1)) == pytest.approx(math.degrees(math.atan(1 / 3)), abs=1e-12)


def test_angle_ignores_direction():
    assert angle_degrees(S(0, 0, 1, 1), S(0, 0, 2, 1)) == pytest.approx(angle_degrees(S(1, 1, 0, 0), S(0, 0, 2, 1)))


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        S(1, 1, 1, 1)


def test_floats_refused_on_the_exact_path():
    with pytest.raises(TypeError):
        Point.of(0.5, 1)


@pytest.mark.parametrize("text, value", [("7/3", Fraction(7, 3)), ("-2", Fraction(-2)), ("4/6", Fraction(2, 3)),
                                         (" 1/-2", Fraction(-1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "x", "1.5"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(4, 6)) == "2/3"
    assert format_rational(Fraction(-3, 1)) == "-3"
    assert parse_rational(format_rational(Fraction(-22, 7))) == Fraction(-22, 7)


# -- properties ---------------------------------------------------------------

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
points = st.builds(Point, rationals, rationals)
small = st.integers(-8, 8)


def _det_sign_bigint(p, q, r):
    # independent evaluation: clear denominators and use Python ints only
    den = 1
    for v in (*p, *q, *r):
        den = den * v.denominator // math.gcd(den, v.denominator)
    P_ = [(int(v * den) for v in pt) for pt in (p, q, r)]
    (px, py), (qx, qy), (rx, ry) = (tuple(t) for t in P_)
    det = qx * ry - qy * rx - px * ry + py * rx + px * qy - py * qx
    return (det > 0) - (det < 0)


@settings(max_examples=300, deadline=None)
@given(points, points, points)
def test_orientation_antisymmetric_and_exact(p, q, r):
    o = orientation(p, q, r)
    assert o == -orientation(p, r, q)
    assert o == orientation(q, r, p) == orientation(r, p, q)
    assert o == _det_sign_bigint(p, q, r)


@st.composite
def segments(draw, coord=small):
    a = Point.of(draw(coord), draw(coord))
    b = Point.of(draw(coord), draw(coord))
    if a == b:
        b = Point(a.x + 1, a.y)
    return Segment(a, b)


@settings(max_examples=400, deadline=None)
@given(segments(), segments())
def test_intersect_symmetric(s1, s2):
    r1, r2 = intersect(s1, s2), intersect(s2, s1)
    assert r1.kind == r2.kind
    assert r1.point == r2.point


@settings(max_examples=300, deadline=None)
@given(segments(st.integers(-1000, 1000)), segments(st.integers(-1000, 1000)))
def test_perpendicular_matches_angle(s1, s2):
    near_right = abs(angle_degrees(s1, s2) - 90.0) <= 1e-9
    assert is_perpendicular(s1, s2) == near_right


@settings(max_examples=200, deadline=None)
@given(segments(), segments())
def test_proper_crossing_point_lies_on_both(s1, s2):
    r = intersect(s1, s2)
    if r.kind is Kind.PROPER_CROSSING:
        assert orientation(s1.a, s1.b, r.point) == 0
        assert orientation(s2.a, s2.b, r.point) == 0
        assert r.point not in (s1.a, s1.b, s2.a, s2.b)
