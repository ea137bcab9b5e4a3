import math
from dataclasses import replace

import numpy as np
import pytest

from racforge import _float_kernels as F
from racforge.checker import check_rac, embedding_relation, extract_embedding
from racforge.errors import InvalidParameter, NonFinite
from racforge.graph import Graph, augmented_antiprism, chain_drawing, seed_drawing
from racforge.layout import (FloatDrawing, LayoutConfig, automorphisms, canonical_code, class_id,
                             classify_near_rac, crossing_energy, energy, gradient, optimize, survey_embeddings)

ONLY_CROSSING = LayoutConfig(w_spring=0.0, w_repulsion=0.0, w_crossing=1.0)


def fd(graph, pos):
    return FloatDrawing(graph, pos)


def cross_graph():
    return Graph.build("abcd", [("a", "b"), ("c", "d")])


def k7():
    vs = [str(i) for i in range(7)]
    return Graph.build(vs, [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]])


def c4():
    return Graph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


# -- energy ------------------------------------------------------------------------

def test_seed_crossing_term_vanishes():
    d = FloatDrawing.from_drawing(seed_drawing("A"))
    assert crossing_energy(d) <= 1e-12
    assert energy(d, ONLY_CROSSING) <= 1e-12


def test_45_degree_crossing():
    d = fd(cross_graph(), {"a": (-1, 0), "b": (1, 0), "c": (-1, -1), "d": (1, 1)})
    assert energy(d, ONLY_CROSSING) == pytest.approx(0.5, abs=1e-15)


def test_perturbed_seed_costs_more():
    base = FloatDrawing.from_drawing(seed_drawing("A"))
    pos = dict(base.positions)
    pos["i0"] = (2.0, 1 / 7)
    moved = fd(base.graph, pos)
    for cfg in (ONLY_CROSSING, LayoutConfig()):
        assert energy(moved, cfg) > energy(base, cfg)


def test_energy_terms_by_hand():
    # one edge of length 2, rest length 1, and a close pair at distance 0.1
    g = Graph.build("abc", [("a", "b")])
    d = fd(g, {"a": (0, 0), "b": (2, 0), "c": (0, 0.1)})
    cfg = LayoutConfig(w_crossing=0.0, w_spring=3.0, w_repulsion=2.0, repulsion_radius=0.3)
    assert energy(d, cfg) == pytest.approx(3.0 * 1.0 + 2.0 * 0.2 ** 2)


def test_touching_edges_do_not_count_as_crossings():
    d = fd(cross_graph(), {"a": (-1, 0), "b": (1, 0), "c": (0, 0), "d": (1, 1)})
    assert crossing_energy(d) == 0.0


def test_non_finite_rejected():
    with pytest.raises(NonFinite):
        fd(cross_graph(), {"a": (math.inf, 0), "b": (1, 0), "c": (0, 1), "d": (1, 1)})
    d = fd(cross_graph(), {"a": (-1e200, 0), "b": (1e200, 0), "c": (0, -1e200), "d": (0, 1e200)})
    with pytest.raises(NonFinite):
        energy(d, LayoutConfig(w_spring=1.0))


# -- gradient -------------------------------------------------------------------------

def test_symmetric_right_cross_has_zero_gradient():
    d = fd(cross_graph(), {"a": (-1, 0), "b": (1, 0), "c": (0, -1), "d": (0, 1)})
    for gx, gy in gradient(d, ONLY_CROSSING).values():
        assert gx == 0.0 and gy == 0.0


def test_springs_at_rest_have_zero_gradient():
    g = Graph.build("abc", [("a", "b"), ("b", "c")])
    d = fd(g, {"a": (0, 0), "b": (1, 0), "c": (1, 1)})
    cfg = LayoutConfig(w_crossing=0.0, w_repulsion=0.0, w_spring=1.0, rest_length=1.0)
    for gx, gy in gradient(d, cfg).values():
        assert abs(gx) < 1e-15 and abs(gy) < 1e-15


def random_problem(rng, n=8, density=0.5):
    I, J = np.triu_indices(n, 1)
    keep = rng.random(len(I)) < density
    eu, ev = I[keep].astype(np.int64), J[keep].astype(np.int64)
    return eu, ev


def crossing_signature(P, eu, ev):
    a, b, _ = F.crossings(P, eu, ev)
    return set(zip(a.tolist(), b.tolist()))


def fd_relative_error(P, eu, ev, args, h=1e-6):
    """Max per-coordinate relative error of the analytic gradient, or None near a crossing-set change."""
    _, _, G = F.energy_grad(P, eu, ev, *args, True)
    sig = crossing_signature(P, eu, ev)
    num = np.zeros_like(P)
    for i in range(P.shape[0]):
        for k in range(2):
            Pp, Pm = P.copy(), P.copy()
            Pp[i, k] += h
            Pm[i, k] -= h
            if crossing_signature(Pp, eu, ev) != sig or crossing_signature(Pm, eu, ev) != sig:
                return None
            num[i, k] = (F.energy_grad(Pp, eu, ev, *args, False)[0]
                         - F.energy_grad(Pm, eu, ev, *args, False)[0]) / (2 * h)
    scale = np.maximum(np.abs(G), np.abs(num))
    err = np.abs(G - num)
    rel = np.where(scale > 0, err / np.where(scale > 0, scale, 1.0), 0.0)
    return float(rel.max())


def test_gradient_matches_finite_differences(backend):
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 20:
        eu, ev = random_problem(rng)
        P = rng.uniform(0, 3, size=(8, 2))
        err = fd_relative_error(P, eu, ev, (1.0, 0.5, 1.0, 0.7, 0.8))
        if err is None:
            continue
        assert err < 1e-5
        checked += 1


def test_backends_agree():
    from racforge import _accel
    rng = np.random.default_rng(9)
    prev = _accel.backend()
    try:
        for _ in range(20):
            eu, ev = random_problem(rng, n=12, density=0.4)
            P = rng.uniform(0, 4, size=(12, 2))
            out = {}
            for name in ("numba", "numpy"):
                _accel.set_backend(name)
                E, ec, G = F.energy_grad(P, eu, ev, 1.0, 0.3, 1.0, 0.5, 0.6)
                a, b, c = F.crossings(P, eu, ev)
                order = np.lexsort((b, a))
                out[name] = (E, ec, G, a[order], b[order], c[order])
            (E1, c1, G1, a1, b1, k1), (E2, c2, G2, a2, b2, k2) = out["numba"], out["numpy"]
            assert E1 == pytest.approx(E2, rel=1e-12, abs=1e-14)
            assert c1 == pytest.approx(c2, rel=1e-12, abs=1e-14)
            np.testing.assert_allclose(G1, G2, rtol=1e-10, atol=1e-12)
            np.testing.assert_array_equal(a1, a2)
            np.testing.assert_array_equal(b1, b2)
            np.testing.assert_allclose(k1, k2, rtol=1e-12)
    finally:
        _accel.set_backend(prev)


# -- optimize -----------------------------------------------------------------------------

def test_cycle_untangles_with_restarts():
    d, rep = optimize(c4(), LayoutConfig(restarts=8, seed=0))
    assert rep.min_angle is None
    assert crossing_energy(d) == 0.0
    assert len(rep.restarts) == 8


def test_optimize_is_deterministic():
    g = augmented_antiprism(4).graph
    cfg = LayoutConfig(restarts=2, seed=5, max_iterations=400, polish_iterations=200)
    d1, r1 = optimize(g, cfg)
    d2, r2 = optimize(g, cfg)
    assert np.array_equal(d1.as_array(), d2.as_array())
    assert r1.to_dict() == r2.to_dict()


def test_energy_non_increasing_per_phase():
    g = augmented_antiprism(4).graph
    _, rep = optimize(g, LayoutConfig(restarts=3, seed=1, max_iterations=500, polish_iterations=300),
                      keep_traces=True)
    for summary in rep.restarts:
        for phase in ("main", "polish"):
            tr = np.array(summary["trace"][phase])
            assert np.all(np.diff(tr) <= 0.0), phase


def test_report_min_angle_range():
    _, rep = optimize(k7(), LayoutConfig(restarts=2, seed=3, max_iterations=300, polish_iterations=100))
    assert rep.min_angle is None or 0 < rep.min_angle <= 90


def test_k7_never_near_rac():
    cfg = LayoutConfig(restarts=5, seed=0)
    _, rep = optimize(k7(), cfg)
    for summary in rep.restarts:
        assert summary["min_angle"] is not None and summary["min_angle"] < 90 - cfg.eps_deg


def test_seeded_start_reaches_near_rac():
    g = augmented_antiprism(4).graph
    P0 = FloatDrawing.from_drawing(seed_drawing("A")).as_array() / 3.0
    rng = np.random.default_rng(0)
    P0 = P0 + rng.uniform(-0.2, 0.2, size=P0.shape)
    d, rep = optimize(g, LayoutConfig(), starts=[P0])
    assert classify_near_rac(d).near_rac


@pytest.mark.xfail(strict=True, reason="from uniform random starts the descent settles in layouts with "
                                       "10 or more crossings; observed success 0 of 20")
def test_random_starts_reach_near_rac_on_antiprism():
    g = augmented_antiprism(4).graph
    ok = 0
    for seed in range(20):
        d, _ = optimize(g, LayoutConfig(seed=seed))
        ok += classify_near_rac(d).near_rac
    assert ok > 0


# -- classification ---------------------------------------------------------------------------

def test_classify_seed_matches_exact_embedding():
    d = seed_drawing("A")
    res = classify_near_rac(FloatDrawing.from_drawing(d), 0.1)
    assert res.near_rac
    assert embedding_relation(res.embedding, extract_embedding(d)) == "identical"


def test_classify_45_degrees():
    d = fd(cross_graph(), {"a": (-1, 0), "b": (1, 0), "c": (-1, -1), "d": (1, 1)})
    res = classify_near_rac(d, 0.1)
    assert not res.near_rac and res.min_angle == pytest.approx(45.0)


def test_classify_crossing_free():
    d = fd(c4(), {"a": (0, 0), "b": (1, 0), "c": (1, 1), "d": (0, 1)})
    res = classify_near_rac(d)
    assert res.near_rac and res.embedding.dummy_meta == {}


def test_classify_tolerance_degeneracy():
    # vertex c within 1e-12 of edge a-b
    g = Graph.build("abc", [("a", "b")])
    d = fd(g, {"a": (0, 0), "b": (2, 0), "c": (1, 1e-12)})
    assert not classify_near_rac(d).near_rac


# -- survey --------------------------------------------------------------------------------------

def _path4():
    return Graph.build("abcd", [("a", "b"), ("b", "c"), ("c", "d")])


def test_path_graph_crossing_free_outcomes_share_one_class():
    res = survey_embeddings(_path4(), LayoutConfig(restarts=20, seed=0))
    free = {r["class"] for r in res.runs if r["near_rac"] and r["min_angle"] is None}
    assert len(free) == 1
    assert survey_embeddings(Graph.build("abc", [("a", "b"), ("b", "c")]),
                             LayoutConfig(restarts=5, seed=0)).near_rac == 5


@pytest.mark.xfail(strict=True, reason="random starts that begin with a-b crossing c-d keep that crossing and "
                                       "end in a second, perpendicular-crossing class")
def test_path_graph_single_class():
    res = survey_embeddings(_path4(), LayoutConfig(restarts=20, seed=0))
    assert len(res.classes) == 1


def test_fixture_classes_agree_modulo_symmetry():
    g = augmented_antiprism(4).graph
    autos = automorphisms(g)
    assert len(autos) == 16
    a = canonical_code(extract_embedding(seed_drawing("A")), autos)
    b = canonical_code(extract_embedding(seed_drawing("B")), autos)
    assert a == b


def test_small_seeded_survey_is_sound():
    g = augmented_antiprism(4).graph
    cfg = LayoutConfig(restarts=8, seed=0, seeded_fraction=1.0)
    res = survey_embeddings(g, cfg, [seed_drawing("A"), seed_drawing("B")])
    assert res.near_rac >= 1
    fixture_id = class_id(canonical_code(extract_embedding(seed_drawing("A")), automorphisms(g)))
    assert {c["id"] for c in res.classes.values()} == {fixture_id}
    for r, d in res.drawings.items():
        rep = check_rac(d.snapped())
        assert rep.property1_violations == []
        assert not rep.degeneracies


def test_survey_is_deterministic():
    g = augmented_antiprism(4).graph
    cfg = LayoutConfig(restarts=4, seed=2, seeded_fraction=0.5, max_iterations=500, polish_iterations=500)
    fixtures = [seed_drawing("A"), seed_drawing("B")]
    assert survey_embeddings(g, cfg, fixtures).to_dict() == survey_embeddings(g, cfg, fixtures).to_dict()


# -- config --------------------------------------------------------------------------------------

@pytest.mark.parametrize("field, value", [("w_spring", -1.0), ("eps_deg", 0.0), ("eps_deg", 2.0),
                                          ("restarts", 0), ("step", 0.0), ("seeded_fraction", 1.5)])
def test_config_validation(field, value):
    with pytest.raises(InvalidParameter):
        replace(LayoutConfig(), **{field: value})


def test_config_round_trip_and_unknown_fields():
    cfg = LayoutConfig(seed=7, restarts=3)
    assert LayoutConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(InvalidParameter):
        LayoutConfig.from_dict({"sead": 1})


def test_snapped_is_exact_and_lossless():
    g = cross_graph()
    d = fd(g, {"a": (0.1, 0.0), "b": (1.0, 0.3), "c": (0.5, -1.0), "d": (0.5, 1.0)})
    s = d.snapped()
    for v, (x, y) in d.positions.items():
        assert float(s.positions[v].x) == x and float(s.positions[v].y) == y


def test_chain_fixture_survey_single_class():
    lg, d = chain_drawing(2)
    cfg = LayoutConfig(restarts=4, seed=0, seeded_fraction=1.0)
    res = survey_embeddings(lg.graph, cfg, [d, d.mirrored()])
    assert res.near_rac >= 1
    assert len(res.classes) == 1
