"""Koszul factorization: exact division, the squared differential, faults."""

import pytest

from lgmirror.koszul import (
    KoszulData,
    apply_differential,
    center_decompose,
    corrupt_cofactor,
    divide_linear,
    equal_mod_adjoined,
    gr24_koszul,
    koszul_square_check,
    og15_koszul,
    reduce_adjoined,
)
from lgmirror.laurent import LaurentPoly
from lgmirror.rational import RationalFunction, as_rational, parse


@pytest.fixture(scope="module")
def og_data():
    return og15_koszul()


@pytest.fixture(scope="module")
def gr_data():
    return gr24_koszul()


# -- exact division --------------------------------------------------------


def test_divide_linear_plain():
    q = divide_linear(parse("x^2 - 9").num, "x", LaurentPoly.constant(3))
    assert RationalFunction.from_poly(q).equal(parse("x + 3"))


def test_divide_linear_inexact_raises():
    with pytest.raises(ArithmeticError):
        divide_linear(parse("x^2 + 1").num, "x", LaurentPoly.constant(1))


def test_divide_linear_missing_variable_raises():
    with pytest.raises(ArithmeticError):
        divide_linear(parse("y + 1").num, "x", LaurentPoly.constant(1))


def test_divide_linear_handles_negative_exponents():
    # 1/x - 1/2 vanishes at x = 2; quotient must be -1/(2x)
    p = parse("1/x - 1/2").num
    q = divide_linear(p, "x", LaurentPoly.constant(2))
    product = RationalFunction.from_poly(q) * parse("x - 2")
    assert product.equal(RationalFunction.from_poly(p))


def test_divide_linear_with_adjoined_symbol():
    # x^2 + 1 = (x - s)(x + s) once s^2 = -1
    q = divide_linear(parse("x^2 + 1").num, "x", parse("s").num, symbol="s")
    assert RationalFunction.from_poly(q).equal(parse("x + s"))


# -- the adjoined relation -------------------------------------------------


def test_reduce_adjoined_powers():
    assert reduce_adjoined(parse("s^2 + 1").num, "s").is_zero()
    assert reduce_adjoined(parse("s^3").num, "s").key() == parse("-s").num.key()
    assert reduce_adjoined(parse("s^4").num, "s").key() == parse("1").num.key()
    assert reduce_adjoined(parse("1/s").num, "s").key() == parse("-s").num.key()


def test_reduce_adjoined_leaves_other_variables_alone():
    p = parse("x^2*s^2 + x^2").num
    assert reduce_adjoined(p, "s").is_zero()
    assert reduce_adjoined(p, "t").key() == p.key()


def test_equal_mod_adjoined():
    assert equal_mod_adjoined(parse("s^2"), parse("-1"), "s")
    assert not equal_mod_adjoined(parse("s^2"), parse("1"), "s")
    assert not equal_mod_adjoined(parse("s^2"), parse("-1"), None)


# -- decomposition ---------------------------------------------------------


def test_single_variable_square():
    data = center_decompose(parse("x^2"), {"x": 0})
    assert data.cofactors[0].equal(parse("x"))
    assert data.value.equal(RationalFunction.constant(0))
    assert data.sum_identity()
    assert koszul_square_check(data).passed


def test_single_variable_shifted_center():
    data = center_decompose(parse("x^2"), {"x": 3})
    assert data.cofactors[0].equal(parse("x + 3"))
    assert data.value.equal(RationalFunction.constant(9))
    assert koszul_square_check(data).passed


def test_cofactors_are_linear_in_the_potential():
    center = {"u": 0, "v": 0, "z0": -1}
    extra = parse("u*v + z0^2")
    base = center_decompose(parse("v + v*z0 + u^2/(z0*(u*v - 1))"), center)
    bump = center_decompose(extra, center)
    both = center_decompose(base.potential + extra, center)
    for combined, a, b in zip(both.cofactors, base.cofactors, bump.cofactors):
        assert combined.equal(a + b)


def test_center_must_cover_all_variables():
    with pytest.raises(ValueError, match="cover"):
        center_decompose(parse("x + y"), {"x": 0})


def test_center_on_pole_rejected():
    with pytest.raises(ValueError, match="pole"):
        center_decompose(parse("1/z0 + u"), {"u": 0, "z0": 0})
    with pytest.raises(ValueError, match="pole"):
        center_decompose(parse("1/(u*v - 1)"), {"u": 1, "v": 1})


def test_center_values_must_be_polynomial():
    with pytest.raises(ValueError, match="polynomial"):
        center_decompose(parse("x + y"), {"x": parse("1/y"), "y": 0})


def test_variable_used_as_adjoined_symbol_rejected():
    with pytest.raises(ValueError, match="adjoined"):
        center_decompose(parse("x^2"), {"x": 0}, adjoined="x")


def test_vacuous_cofactor_for_absent_variable():
    data = center_decompose(parse("x^2"), {"x": 0, "y": 5})
    assert data.cofactors[1].equal(RationalFunction.constant(0))
    assert koszul_square_check(data).passed


# -- the two model factorizations ------------------------------------------


def test_og_decomposition(og_data):
    assert og_data.variables == ("u", "v", "z0")
    assert og_data.value.equal(RationalFunction.constant(0))
    assert og_data.symbol is None
    assert og_data.sum_identity()


def test_og_square_check_covers_eight_basis_elements(og_data):
    report = koszul_square_check(og_data)
    assert report.passed, [v.name for v in report.failures()]
    squares = [v for v in report.verdicts if v.name.startswith("square[")]
    assert len(squares) == 8


def test_og_first_cofactor(og_data):
    assert og_data.cofactors[0].equal(parse("u"))


def test_gr_decomposition(gr_data):
    assert gr_data.variables == ("u", "v", "z0", "w0")
    assert gr_data.value.equal(RationalFunction.constant(0))
    assert gr_data.symbol == "s"
    assert gr_data.sum_identity()


def test_gr_square_check_covers_sixteen_basis_elements(gr_data):
    report = koszul_square_check(gr_data)
    assert report.passed, [v.name for v in report.failures()]
    squares = [v for v in report.verdicts if v.name.startswith("square[")]
    assert len(squares) == 16


def test_gr_cofactors_are_reduced(gr_data):
    # after rewriting, the adjoined symbol appears at most linearly
    for cof in gr_data.cofactors:
        if "s" not in cof.num.vars:
            continue
        idx = cof.num.vars.index("s")
        assert all(exps[idx] in (0, 1) for exps in cof.num.terms)


def test_model_labels(og_data, gr_data):
    assert og_data.label == "og(1,5)/immersed"
    assert gr_data.label == "gr(2,4)/immersed"
    assert center_decompose(parse("x^2"), {"x": 0}).label == "generic"


# -- the differential ------------------------------------------------------


def test_differential_flips_parity(og_data):
    one = RationalFunction.constant(1)
    for mask in range(8):
        image = apply_differential(og_data, {mask: one})
        for out_mask in image:
            assert bin(out_mask).count("1") % 2 != bin(mask).count("1") % 2


def test_differential_square_is_diagonal(og_data):
    one = RationalFunction.constant(1)
    target = og_data.potential - og_data.value
    for mask in range(8):
        square = apply_differential(og_data, apply_differential(og_data, {mask: one}))
        for out_mask, coeff in square.items():
            expected = target if out_mask == mask else RationalFunction.constant(0)
            assert coeff.equal(expected)


def test_corrupted_cofactor_detected(og_data):
    bad = corrupt_cofactor(og_data, 2)
    report = koszul_square_check(bad)
    assert not report.passed
    assert any(v.name == "cofactor-sum" for v in report.failures())


def test_corruption_leaves_original_intact(og_data):
    corrupt_cofactor(og_data, 0)
    assert koszul_square_check(og_data).passed


# -- serialization ---------------------------------------------------------


def test_json_roundtrip(gr_data):
    text = gr_data.to_json()
    back = KoszulData.from_json(text)
    assert back.variables == gr_data.variables
    assert back.symbol == "s"
    assert back.label == gr_data.label
    assert back.sum_identity()
    assert koszul_square_check(back).passed


def test_json_schema_guard():
    with pytest.raises(ValueError, match="schema"):
        KoszulData.from_json('{"schema": "nope/9"}')


def test_as_dict_contains_cofactors(og_data):
    data = og_data.as_dict()
    assert data["schema"] == "koszul/1"
    assert len(data["cofactors"]) == 3
    assert data["value"] == "0"
