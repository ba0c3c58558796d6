"""Koszul-type matrix factorizations of a potential.

Centering the potential at a chosen point splits W - W(center) into a sum
of (x_i - c_i) * f_i with exactly divided cofactors f_i.  The associated
odd operator on the exterior algebra squares to (W - W(center)) times the
identity, which is verified coefficient by coefficient in exact arithmetic.
An extra symbol with square -1 can be adjoined for centers that need it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .laurent import LaurentPoly
from .potentials import Potential, gr24_chart_potentials, og_potentials
from .rational import RationalFunction, as_rational, parse
from .report import Report, Verdict

KOSZUL_SCHEMA = "koszul/1"

_ZERO = LaurentPoly((), {})


def reduce_adjoined(poly: LaurentPoly, symbol: str | None) -> LaurentPoly:
    """Rewrite powers of the adjoined symbol via symbol^2 = -1."""
    if symbol is None or symbol not in poly.vars:
        return poly
    idx = poly.vars.index(symbol)
    terms: dict = {}
    for exps, coeff in poly.terms.items():
        e = exps[idx] % 4
        sign = 1 if e < 2 else -1
        new = list(exps)
        new[idx] = e % 2
        key = tuple(new)
        terms[key] = terms.get(key, 0) + sign * coeff
    return LaurentPoly.make(poly.vars, {k: c for k, c in terms.items() if c})


def _reduced(f: RationalFunction, symbol: str | None) -> RationalFunction:
    if symbol is None:
        return f
    return RationalFunction.make(reduce_adjoined(f.num, symbol), f.factors)


def equal_mod_adjoined(
    a: RationalFunction, b: RationalFunction, symbol: str | None
) -> bool:
    if symbol is None:
        return a.equal(b)
    return reduce_adjoined((a - b).num, symbol).is_zero()


def _coefficients_in(poly: LaurentPoly, var: str) -> dict[int, LaurentPoly]:
    idx = poly.vars.index(var)
    rest = tuple(v for k, v in enumerate(poly.vars) if k != idx)
    buckets: dict[int, dict] = {}
    for exps, coeff in poly.terms.items():
        e = exps[idx]
        key = tuple(x for k, x in enumerate(exps) if k != idx)
        buckets.setdefault(e, {})[key] = coeff
    return {e: LaurentPoly.make(rest, terms) for e, terms in buckets.items()}


def divide_linear(
    poly: LaurentPoly, var: str, shift_value: LaurentPoly, symbol: str | None = None
) -> LaurentPoly:
    """Exact quotient poly / (var - shift_value); the input must vanish at
    var = shift_value, modulo the adjoined relation if one is active."""
    if poly.is_zero():
        return poly
    if var not in poly.vars:
        raise ArithmeticError(f"{var} does not divide a polynomial free of it")
    exponents = [exps[poly.vars.index(var)] for exps in poly.terms]
    lift = max(0, -min(exponents))
    work = poly * LaurentPoly.var(var) ** lift if lift else poly
    coeffs = _coefficients_in(work, var)
    top = max(coeffs)
    quotient: dict[int, LaurentPoly] = {}
    carry = _ZERO
    for e in range(top, 0, -1):
        carry = reduce_adjoined(coeffs.get(e, _ZERO) + shift_value * carry, symbol)
        quotient[e - 1] = carry
    remainder = reduce_adjoined(coeffs.get(0, _ZERO) + shift_value * carry, symbol)
    if not remainder.is_zero():
        raise ArithmeticError(f"division by {var} - ({shift_value}) is not exact")
    out = _ZERO
    for e, c in quotient.items():
        out = out + c * LaurentPoly.var(var) ** e
    if lift:
        out = out * LaurentPoly.var(var) ** (-lift)
    return out


@dataclass(frozen=True)
class KoszulData:
    """A potential split as value + sum of (x_i - c_i) * cofactor_i."""

    variables: tuple[str, ...]
    center: tuple[RationalFunction, ...]
    cofactors: tuple[RationalFunction, ...]
    potential: RationalFunction
    value: RationalFunction
    symbol: str | None = None
    label: str = "generic"

    def linear_forms(self) -> list[RationalFunction]:
        return [
            RationalFunction.var(v) - c for v, c in zip(self.variables, self.center)
        ]

    def sum_identity(self) -> bool:
        total = RationalFunction.constant(0)
        for form, cof in zip(self.linear_forms(), self.cofactors):
            total = total + form * cof
        return equal_mod_adjoined(total, self.potential - self.value, self.symbol)

    def as_dict(self) -> dict:
        return {
            "schema": KOSZUL_SCHEMA,
            "label": self.label,
            "variables": list(self.variables),
            "center": [str(c) for c in self.center],
            "cofactors": [str(f) for f in self.cofactors],
            "potential": str(self.potential),
            "value": str(self.value),
            "symbol": self.symbol,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "KoszulData":
        data = json.loads(text)
        if data.get("schema") != KOSZUL_SCHEMA:
            raise ValueError(f"unsupported schema: {data.get('schema')!r}")
        return KoszulData(
            variables=tuple(data["variables"]),
            center=tuple(parse(c) for c in data["center"]),
            cofactors=tuple(parse(f) for f in data["cofactors"]),
            potential=parse(data["potential"]),
            value=parse(data["value"]),
            symbol=data["symbol"],
            label=data["label"],
        )


def _center_value_poly(value) -> LaurentPoly:
    rf = as_rational(value)
    if not rf.is_polynomial():
        raise ValueError("center coordinates must be polynomial expressions")
    if any(e < 0 for exps in rf.num.terms for e in exps):
        raise ValueError("center coordinates must be polynomial expressions")
    return rf.num


def center_decompose(
    potential, center: Mapping[str, object], adjoined: str | None = None
) -> KoszulData:
    """Split the potential at the given center by successive exact division
    of one-variable differences."""
    if isinstance(potential, Potential):
        expr = potential.expr
        label = f"{potential.model}/{potential.chart}"
    else:
        expr = as_rational(potential)
        label = "generic"
    variables = tuple(center.keys())
    if adjoined is not None and adjoined in variables:
        raise ValueError("the adjoined symbol cannot be a chart variable")
    allowed = set(variables) | ({adjoined} if adjoined else set())
    stray = sorted(set(expr.variables()) - allowed)
    if stray:
        raise ValueError(f"center does not cover variables: {stray}")
    values = [_center_value_poly(center[v]) for v in variables]
    stages = [expr]
    for var, val in zip(reversed(variables), reversed(values)):
        try:
            stages.append(stages[-1].substitute({var: RationalFunction.from_poly(val)}))
        except ZeroDivisionError:
            raise ValueError(f"center lies on a pole of the potential at {var}")
    stages.reverse()
    cofactors = []
    for i, (var, val) in enumerate(zip(variables, values)):
        diff = stages[i + 1] - stages[i]
        if diff.num.is_zero():
            cofactors.append(RationalFunction.constant(0))
            continue
        quotient = divide_linear(diff.num, var, val, adjoined)
        cofactors.append(
            _reduced(RationalFunction.make(quotient, diff.factors), adjoined)
        )
    return KoszulData(
        variables=variables,
        center=tuple(RationalFunction.from_poly(v) for v in values),
        cofactors=tuple(cofactors),
        potential=expr,
        value=_reduced(stages[0], adjoined),
        symbol=adjoined,
        label=label,
    )


# -- the odd operator on the exterior algebra ------------------------------


def _basis_label(mask: int, m: int) -> str:
    if mask == 0:
        return "1"
    return "^".join(f"e{i + 1}" for i in range(m) if mask & (1 << i))


def _insert_sign(mask: int, i: int) -> int:
    below = bin(mask & ((1 << i) - 1)).count("1")
    return -1 if below % 2 else 1


def apply_differential(
    data: KoszulData, element: Mapping[int, RationalFunction]
) -> dict[int, RationalFunction]:
    """One application of wedge-by-linear-forms plus cofactor contraction."""
    m = len(data.variables)
    forms = data.linear_forms()
    out: dict[int, RationalFunction] = {}

    def add(mask, term):
        out[mask] = out.get(mask, RationalFunction.constant(0)) + term

    for mask, coeff in element.items():
        for i in range(m):
            bit = 1 << i
            sign = _insert_sign(mask, i)
            if mask & bit:
                add(mask ^ bit, data.cofactors[i] * coeff * sign)
            else:
                add(mask | bit, forms[i] * coeff * sign)
    return out


def koszul_square_check(data: KoszulData) -> Report:
    """Verify the square of the odd operator is multiplication by the
    centered potential on every exterior basis element."""
    m = len(data.variables)
    target = data.potential - data.value
    zero = RationalFunction.constant(0)
    verdicts = [
        Verdict(
            "cofactor-sum",
            data.sum_identity(),
            "linear forms against cofactors rebuild the centered potential",
        )
    ]
    parity_ok = True
    for mask in range(1 << m):
        image = apply_differential(data, {mask: RationalFunction.constant(1)})
        parity_ok &= all(
            bin(k).count("1") % 2 != bin(mask).count("1") % 2 for k in image
        )
        square = apply_differential(data, image)
        ok = True
        detail = "matches"
        for k, coeff in square.items():
            want = target if k == mask else zero
            if not equal_mod_adjoined(coeff, want, data.symbol):
                ok = False
                detail = f"wrong coefficient on {_basis_label(k, m)}"
                break
        verdicts.append(Verdict(f"square[{_basis_label(mask, m)}]", ok, detail))
    verdicts.append(
        Verdict("odd-parity", parity_ok, "the operator swaps even and odd degrees")
    )
    return Report(f"koszul factorization [{data.label}]", tuple(verdicts))


def corrupt_cofactor(data: KoszulData, index: int, offset=1) -> KoszulData:
    """Return a copy with one cofactor shifted; for failure-path tests."""
    cofactors = list(data.cofactors)
    cofactors[index] = cofactors[index] + as_rational(offset)
    return replace(data, cofactors=tuple(cofactors))


def og15_koszul() -> KoszulData:
    """Factorization at the nodal critical point of the quadric model."""
    return center_decompose(og_potentials().immersed, {"u": 0, "v": 0, "z0": -1})


def gr24_koszul() -> KoszulData:
    """Factorization at a nodal point of the smallest Grassmannian model;
    the last coordinate needs an adjoined square root of -1."""
    return center_decompose(
        gr24_chart_potentials()[0],
        {"u": 0, "v": 0, "z0": -1, "w0": parse("s")},
        adjoined="s",
    )
