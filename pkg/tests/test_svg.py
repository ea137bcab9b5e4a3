import re

import pytest

from racforge.errors import InvalidParameter
from racforge.graph import Drawing, Graph, seed_drawing
from racforge.layout import FloatDrawing
from racforge.svg import SvgOptions, render_svg


def glyphs(svg):
    return len(re.findall(r"<polyline ", svg))


def test_seed_has_four_glyphs():
    assert glyphs(render_svg(seed_drawing("A"))) == 4


def test_float_seed_has_four_glyphs():
    assert glyphs(render_svg(FloatDrawing.from_drawing(seed_drawing("B")))) == 4


def test_crossing_free_has_no_glyphs():
    g = Graph.build("abc", [("a", "b"), ("b", "c")])
    d = Drawing(g, {"a": (0, 0), "b": (1, 0), "c": (1, 1)})
    assert glyphs(render_svg(d)) == 0


def test_non_perpendicular_crossing_gets_no_glyph():
    g = Graph.build("abcd", [("a", "b"), ("c", "d")])
    d = Drawing(g, {"a": (-1, 0), "b": (1, 0), "c": (-1, -1), "d": (1, 1)})
    assert glyphs(render_svg(d)) == 0


def test_glyphs_can_be_disabled():
    assert glyphs(render_svg(seed_drawing("A"), SvgOptions(show_crossings=False))) == 0


def test_deterministic():
    assert render_svg(seed_drawing("A")) == render_svg(seed_drawing("A"))


def test_highlight_roles():
    svg = render_svg(seed_drawing("A"), SvgOptions(highlight_roles=("central",)), {"central": ["c"]})
    assert re.search(r'fill="#d62728"><title>c</title>', svg)
    assert svg.count('fill="#d62728"') == 1


def test_counts_and_escaping():
    g = Graph.build(["a<b", "c"], [("a<b", "c")])
    svg = render_svg(Drawing(g, {"a<b": (0, 0), "c": (1, 0)}))
    assert svg.count("<line ") == 1 and svg.count("<circle ") == 2
    assert "a&lt;b" in svg


def test_scale_must_be_positive():
    with pytest.raises(InvalidParameter):
        SvgOptions(scale=0)
