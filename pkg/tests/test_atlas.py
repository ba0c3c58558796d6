"""Chart gluing: transitions, atlases, cocycle and transport checks."""

import pytest

from lgmirror.atlas import (
    Atlas,
    Chart,
    Transition,
    compose,
    conjugate_chart,
    extend_identity,
    gauge_automorphism,
    gr24_atlas,
    gr_product_atlas,
    identity_transition,
    local_model_atlas,
    local_transitions,
    _local_inverses,
    og15_atlas,
    product_charts,
    product_transition,
    verify_cocycle,
    verify_potential_transport,
)
from lgmirror.rational import RationalFunction, parse


@pytest.fixture(scope="module")
def tree6():
    return gr_product_atlas(6)


# -- the node wall crossings ----------------------------------------------


def test_local_transitions_canonical():
    t01, t02, t21 = local_transitions()
    assert (t01.source, t01.target) == ("immersed", "chekanov")
    assert t01.bindings["x1"].equal(parse("u*v - 1"))
    assert t01.bindings["y1"].equal(parse("u"))
    assert t02.bindings["y2"].equal(parse("1/v"))
    assert t21.bindings["y1"].equal(parse("y2*(1 + x2)"))
    assert any(c.equal(parse("u*v - 1")) for c in t01.constraints)


def test_degenerate_slice_hits_minus_one():
    # collapsing the second node coordinate pins the first chart coordinate
    t01 = local_transitions()[0]
    assert t01.bindings["x1"].substitute({"v": 0}).equal(parse("-1"))


def test_uv_is_a_shared_function():
    i20 = _local_inverses()[1]
    pulled = parse("u*v").substitute(i20.bindings)
    assert pulled.equal(parse("1 + x2"))


def test_compose_with_identity():
    t01 = local_transitions()[0]
    chart = Chart("immersed", ("u", "v"))
    left = compose(identity_transition(chart), t01)
    assert all(left.bindings[k].equal(v) for k, v in t01.bindings.items())


def test_compose_rejects_mismatched_charts():
    t01, t02, _ = local_transitions()
    with pytest.raises(ValueError):
        compose(t01, t02)


def test_composed_wall_crossing_matches_declared():
    t01, t02, t21 = local_transitions()
    i10, i20, i12 = _local_inverses()
    via_node = compose(i10, t02)
    assert (via_node.source, via_node.target) == ("chekanov", "clifford")
    assert all(via_node.bindings[k].equal(v) for k, v in i12.bindings.items())
    other_way = compose(i20, t01)
    assert all(other_way.bindings[k].equal(v) for k, v in t21.bindings.items())


def test_local_atlas_cocycle():
    report = verify_cocycle(local_model_atlas())
    assert report.passed
    names = {v.name for v in report.verdicts}
    assert "triangle immersed->clifford->chekanov" in names
    assert "roundtrip chekanov<->immersed" in names
    assert len(report.verdicts) == 9


def test_local_atlas_transport_is_vacuous():
    report = verify_potential_transport(local_model_atlas())
    assert report.passed
    assert [v.name for v in report.verdicts] == ["no-edges-with-potentials"]


def test_perturbed_local_atlas_fails_cocycle():
    report = verify_cocycle(local_model_atlas(perturb_cocycle=True))
    assert not report.passed
    failed = {v.name for v in report.failures()}
    assert "triangle immersed->clifford->chekanov" in failed


# -- paper atlases ---------------------------------------------------------


def test_gr24_atlas_passes_both_suites():
    a = gr24_atlas()
    assert verify_cocycle(a).passed
    report = verify_potential_transport(a)
    assert report.passed
    assert len(report.verdicts) == 6


def test_gr24_sign_flip_fails_transport():
    a = gr24_atlas(flip_sign=True)
    assert verify_cocycle(a).passed
    report = verify_potential_transport(a)
    assert not report.passed
    assert any("chekanov" in v.name for v in report.failures())


def test_og15_atlas_passes_both_suites():
    a = og15_atlas()
    assert verify_cocycle(a).passed
    report = verify_potential_transport(a)
    assert report.passed
    names = {v.name for v in report.verdicts}
    assert "transport toric-fiber->clifford" in names
    assert "transport clifford->toric-fiber" in names


def test_tree_atlas_charts(tree6):
    assert {c.name for c in tree6.charts} == {
        "torus",
        "immersed[2,3]",
        "chekanov[2,3]",
        "clifford[2,3]",
        "immersed[1,2;3,4]",
        "chekanov[1,2;3,4]",
        "clifford[1,2;3,4]",
    }
    assert tree6.transition("torus", "clifford[2,3]") is not None
    assert tree6.transition("torus", "immersed[2,3]") is None


def test_tree_atlas_passes_both_suites(tree6):
    cocycle = verify_cocycle(tree6)
    transport = verify_potential_transport(tree6)
    assert cocycle.passed
    assert transport.passed
    assert len(cocycle.verdicts) == 20
    assert len(transport.verdicts) == 16


def test_tree_atlas_surgered_potential_is_load_bearing(tree6):
    # the immersed-chart potentials come from surgery, the clifford ones
    # from substitution into the torus potential; transport ties them
    w0 = tree6.potentials["immersed[2,3]"]
    w2 = tree6.potentials["clifford[2,3]"]
    t = tree6.transition("immersed[2,3]", "clifford[2,3]")
    assert w2.expr.substitute(t.bindings).equal(w0.expr)


# -- product transitions ---------------------------------------------------


def test_product_transition_bindings_n4():
    t = product_transition(4, {(1, 2)}, ("torus", "clifford"))
    assert t.bindings["x1_2"].equal(parse("z1_2*z2_1/(z1_1*z2_2)"))
    assert t.bindings["y1_2"].equal(parse("z2_2/z2_1"))
    back = product_transition(4, {(1, 2)}, ("clifford", "torus"))
    assert back.bindings["z1_2"].equal(parse("x1_2*y1_2*z1_1"))
    assert back.bindings["z2_1"].equal(parse("z2_2/y1_2"))


def test_product_transition_shares_holonomies():
    t = product_transition(6, {(2, 3)}, ("immersed", "chekanov"))
    for z in ("z1_1", "z1_2", "z1_4", "z2_1", "z2_3", "z2_4"):
        assert t.bindings[z].equal(RationalFunction.var(z))
    assert t.bindings["x2_1"].equal(parse("u2*v2 - 1"))
    assert t.bindings["y2_1"].equal(parse("u2"))


def test_product_transition_double_pair_acts_on_both_slots():
    t = product_transition(6, {(1, 2), (3, 4)}, ("clifford", "chekanov"))
    assert t.bindings["y1_1"].equal(parse("y1_2*(1 + x1_2)"))
    assert t.bindings["y3_1"].equal(parse("y3_2*(1 + x3_2)"))


def test_product_transition_empty_set_is_identity():
    t = product_transition(5, frozenset(), ("torus", "torus"))
    assert t.source == t.target == "torus"
    assert all(expr.equal(RationalFunction.var(name)) for name, expr in t.bindings.items())


def test_product_transition_rejects_bad_input():
    with pytest.raises(ValueError):
        product_transition(6, {(2, 3)}, ("torus", "chekanov"))
    with pytest.raises(ValueError):
        product_transition(6, {(1, 2), (2, 3)}, ("immersed", "chekanov"))


def test_product_charts_variables():
    named = product_charts(6, {(1, 2), (3, 4)})
    assert named["chekanov"].variables == (
        "x1_1", "y1_1", "x3_1", "y3_1", "z1_1", "z1_3", "z2_2", "z2_4",
    )
    assert named["clifford"].variables == (
        "x1_2", "y1_2", "x3_2", "y3_2", "z1_1", "z1_3", "z2_2", "z2_4",
    )


# -- gauge family ----------------------------------------------------------


def test_gauge_zero_is_identity():
    g = gauge_automorphism(0)
    assert g.bindings["u"].equal(parse("u"))
    assert g.bindings["v"].equal(parse("v"))


@pytest.mark.parametrize("k", range(-3, 4))
def test_gauge_preserves_uv(k):
    g = gauge_automorphism(k)
    assert parse("u*v").substitute(g.bindings).equal(parse("u*v"))


@pytest.mark.parametrize("k", [-3, -1, 2, 3])
def test_gauge_inverse_composition(k):
    loop = compose(gauge_automorphism(k), gauge_automorphism(-k))
    assert loop.bindings["u"].equal(parse("u"))
    assert loop.bindings["v"].equal(parse("v"))


@pytest.mark.parametrize("k", [-2, 1, 3])
def test_gauge_conjugated_atlas_still_glues(k):
    base = gr24_atlas()
    forward = extend_identity(gauge_automorphism(k), ("z0", "w0"))
    backward = extend_identity(gauge_automorphism(-k), ("z0", "w0"))
    conj = conjugate_chart(base, "immersed", forward, backward)
    assert verify_cocycle(conj).passed
    assert verify_potential_transport(conj).passed
    expected = base.potentials["immersed"].expr.substitute(forward.bindings)
    assert conj.potentials["immersed"].expr.equal(expected)


# -- atlas container -------------------------------------------------------


def test_atlas_json_roundtrip():
    a = og15_atlas()
    b = Atlas.from_json(a.to_json())
    assert [c.name for c in b.charts] == [c.name for c in a.charts]
    for t in a.transitions:
        back = b.transition(t.source, t.target)
        assert all(back.bindings[k].equal(v) for k, v in t.bindings.items())
    assert verify_cocycle(b).passed
    assert verify_potential_transport(b).passed


def test_atlas_validation():
    u_chart = Chart("a", ("u",))
    v_chart = Chart("b", ("v",))
    ok = Transition("a", "b", {"v": parse("u")})
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), (Transition("a", "c", {"v": parse("u")}),))
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), (Transition("a", "b", {}),))
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), (Transition("a", "b", {"v": parse("w")}),))
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), (ok, ok))
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), ())
    with pytest.raises(ValueError):
        Atlas("x", (u_chart, v_chart), (ok,), {"zzz": None})
    with pytest.raises(ValueError):
        Chart("a", ("u", "u"))
    Atlas("x", (u_chart, v_chart), (ok,))
