"""Tests for the formal parameter expansion."""
from fractions import Fraction

import pytest

from lgmirror.laurent import LaurentPoly
from lgmirror.novikov import NovikovSeries, novikov_expand
from lgmirror.rational import parse


def test_geometric_expansion_of_immersed_term():
    # v/((uv-1) z0) = -(v/z0) (1 + uv + (uv)^2 + ...) under weights u,v -> 1, z0 -> 0
    s = novikov_expand(parse("v/((u*v-1)*z0)"), {"u": 1, "v": 1, "z0": 0}, 6)
    assert s.exponents() == (Fraction(1), Fraction(3), Fraction(5))
    for i, (e, coeff) in enumerate(s.terms):
        expected = LaurentPoly.monomial({"u": i, "v": i + 1, "z0": -1}, -1)
        assert coeff == expected


def test_expansion_to_higher_order():
    s = novikov_expand(parse("v/((u*v-1)*z0)"), {"u": 1, "v": 1, "z0": 0}, 11)
    assert s.exponents() == tuple(Fraction(2 * i + 1) for i in range(5))
    for i, (_, coeff) in enumerate(s.terms):
        assert coeff == LaurentPoly.monomial({"u": i, "v": i + 1, "z0": -1}, -1)


def test_t_variable_gets_default_weight_one():
    s = novikov_expand(parse("T^4/z12 + z12/z11"), {"z12": 3, "z11": 2}, 10)
    assert s.exponents() == (Fraction(1),)
    coeff = s.terms[0][1]
    assert coeff == LaurentPoly.monomial({"z12": -1}) + LaurentPoly.monomial({"z11": -1, "z12": 1})


def test_nonunique_minimal_valuation_rejected():
    with pytest.raises(ValueError):
        novikov_expand(parse("1/(1 + u)"), {"u": 0}, 4)


def test_fractional_weights():
    s = novikov_expand(parse("u + v"), {"u": Fraction(1, 2), "v": Fraction(3, 2)}, 2)
    assert s.exponents() == (Fraction(1, 2), Fraction(3, 2))


def test_product_respects_truncation():
    weights = {"u": 1, "v": 1, "z0": 0}
    a = parse("v/((u*v-1)*z0)")
    b = parse("u^2 + z0")
    sa = novikov_expand(a, weights, 8)
    sb = novikov_expand(b, weights, 8)
    direct = novikov_expand(a * b, weights, 8)
    prod = sa * sb
    common = min(prod.order, direct.order)
    assert prod.truncate(common).terms == direct.truncate(common).terms


def test_product_with_negative_valuations():
    weights = {"u": -1, "v": 2}
    a = parse("u")
    b = parse("v/(1 - u*v)")
    sa = novikov_expand(a, weights, 5)
    sb = novikov_expand(b, weights, 5)
    direct = novikov_expand(a * b, weights, 5)
    prod = sa * sb
    common = min(prod.order, direct.order)
    assert prod.truncate(common).terms == direct.truncate(common).terms


def test_series_constructor_guards():
    one = LaurentPoly.constant(1)
    with pytest.raises(ValueError):
        NovikovSeries(((Fraction(2), one), (Fraction(1), one)), Fraction(5))
    with pytest.raises(ValueError):
        NovikovSeries(((Fraction(7), one),), Fraction(5))
    with pytest.raises(ValueError):
        NovikovSeries(((Fraction(1), LaurentPoly((), {})),), Fraction(5))


def test_truncate_cannot_extend():
    s = novikov_expand(parse("u"), {"u": 1}, 3)
    with pytest.raises(ValueError):
        s.truncate(4)
    assert s.truncate(1).terms == ()
