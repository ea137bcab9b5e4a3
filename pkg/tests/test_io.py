import json
from fractions import Fraction

import pytest

from racforge import io
from racforge.errors import SchemaError
from racforge.geometry import Point
from racforge.graph import Drawing, augmented_antiprism, seed_drawing
from racforge.layout import FloatDrawing, LayoutConfig
from racforge.reduction import compile_formula, parse_dimacs


def test_graph_round_trip(tmp_path):
    lg = augmented_antiprism(4)
    path = tmp_path / "g.json"
    io.write_graph(str(path), lg)
    back = io.read_graph(str(path))
    assert back.graph == lg.graph
    assert back.roles == {k: (v if isinstance(v, str) else list(v)) for k, v in lg.roles.items()}


def test_rational_coordinate_survives(tmp_path):
    d = seed_drawing("A")
    pos = dict(d.positions)
    pos["c"] = Point(Fraction(1, 3), Fraction(-7, 5))
    d = Drawing(d.graph, pos)
    path = tmp_path / "d.json"
    io.write_drawing(str(path), d)
    raw = json.loads(path.read_text())
    assert raw["positions"]["c"] == ["1/3", "-7/5"]
    back, _ = io.read_drawing(str(path))
    assert back.positions == d.positions


def test_float_drawing_round_trip(tmp_path):
    d = FloatDrawing.from_drawing(seed_drawing("B"))
    path = tmp_path / "f.json"
    io.write_drawing(str(path), d)
    back, _ = io.read_drawing(str(path))
    assert isinstance(back, FloatDrawing)
    assert back.positions == d.positions


def test_integer_shorthand_accepted():
    obj = {"graph": {"vertices": ["a", "b"], "edges": [["a", "b"]]}, "positions": {"a": ["0", 2], "b": ["3/6", "1"]}}
    d, _ = io.drawing_from_obj(obj)
    assert d.positions["b"] == Point(Fraction(1, 2), Fraction(1))


@pytest.mark.parametrize("obj, path", [
    ({"vertices": ["a"], "edges": [["a", "z"]]}, "$.edges[0]"),
    ({"vertices": ["a", "a"], "edges": []}, "$.vertices"),
    ({"vertices": ["a", "b"], "edges": [["a", "a"]]}, "$.edges[0]"),
    ({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}, "$.edges[1]"),
    ({"vertices": ["a"], "edges": [], "roles": {"x": ["q"]}}, "$.roles.x"),
    ({"vertices": [1], "edges": []}, "$.vertices[0]"),
    ({"edges": []}, "$"),
])
def test_graph_schema_errors(obj, path):
    with pytest.raises(SchemaError) as info:
        io.graph_from_obj(obj)
    assert info.value.path == path


@pytest.mark.parametrize("positions, path", [
    ({"a": ["0", "0"]}, "$.positions.b"),
    ({"a": ["0", "0"], "b": ["1/0", "0"]}, "$.positions.b[0]"),
    ({"a": ["0", "0"], "b": [0.5, "0"]}, "$.positions.b[0]"),
    ({"a": ["0", "0"], "b": ["0", "0"]}, "$.positions"),
    ({"a": ["0", "0"], "b": ["1", "0"], "c": ["2", "2"]}, "$.positions"),
])
def test_drawing_schema_errors(positions, path):
    obj = {"graph": {"vertices": ["a", "b"], "edges": [["a", "b"]]}, "positions": positions}
    with pytest.raises(SchemaError) as info:
        io.drawing_from_obj(obj)
    assert info.value.path == path


def test_bad_kind():
    with pytest.raises(SchemaError):
        io.drawing_from_obj({"kind": "fuzzy", "graph": {"vertices": [], "edges": []}, "positions": {}})


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        io.read_graph(str(p))


def test_labels_round_trip(tmp_path):
    _, labels = compile_formula(parse_dimacs("p cnf 3 1\n1 -2 3 0"))
    p = tmp_path / "labels.json"
    io.write_labels(str(p), labels)
    back = io.read_labels(str(p))
    assert back.roles == labels.roles
    assert (back.num_variables, back.num_clauses) == (3, 1)


def test_config_round_trip(tmp_path):
    cfg = LayoutConfig(seed=3, restarts=7, eps_deg=0.5)
    p = tmp_path / "cfg.json"
    p.write_text(io.dumps(io.config_to_obj(cfg)))
    assert io.read_config(str(p)) == cfg
    p.write_text('{"restarts": 0}')
    with pytest.raises(SchemaError):
        io.read_config(str(p))


def test_output_is_byte_stable():
    d = seed_drawing("A")
    assert io.dumps(io.drawing_to_obj(d)) == io.dumps(io.drawing_to_obj(seed_drawing("A")))
