"""Superpotential constructors.

The torus potential is a Laurent polynomial in the ladder variables.  Each
admissible set of pairs surgers it: six terms leave, four terms in the
immersed variables u_i, v_i enter.  The same expressions exist on the
homogeneous-coordinate side, where the quantum parameter is q instead of
T^n, and the two sides agree modulo the quadratic coordinate relations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple

from .ladder import index_sets
from .plucker import geometric_to_plucker, pvar, sum_equal_mod_plucker
from .rational import RationalFunction, parse

Pair = tuple[int, int]

_T = RationalFunction.var("T")
_Q = RationalFunction.var("q")
_ONE = RationalFunction.constant(1)

# The n=4 surgered chart and the four-variable local model are the same
# chart under these names.  Kept as explicit data; nothing is inferred.
N4_CHART_RENAMING = {"u1": "u", "v1": "v", "z1_1": "z0", "z2_2": "w0"}


@dataclass(frozen=True)
class Potential:
    """A superpotential, tagged with its chart and declared variables."""

    expr: RationalFunction
    chart: str
    variables: tuple[str, ...]
    model: str

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        allowed = set(self.variables) | {"T", "q"}
        stray = [v for v in self.expr.variables() if v not in allowed]
        if stray:
            raise ValueError(f"undeclared variables in potential: {stray}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "model": self.model,
                "chart": self.chart,
                "variables": list(self.variables),
                "expr": str(self.expr),
            }
        )

    @staticmethod
    def from_json(text: str) -> "Potential":
        data = json.loads(text)
        return Potential(
            expr=parse(data["expr"]),
            chart=data["chart"],
            variables=tuple(data["variables"]),
            model=data["model"],
        )


def _sum(terms) -> RationalFunction:
    total = RationalFunction.constant(0)
    for t in terms:
        total = total + t
    return total


def _validate_pairs(n: int, pair_set) -> frozenset:
    pair_set = frozenset((int(i), int(j)) for i, j in pair_set)
    valid, _ = index_sets(n)
    if pair_set not in valid:
        raise ValueError(f"not a valid pair set for n={n}: {sorted(pair_set)}")
    return pair_set


def _pairs_label(pair_set) -> str:
    return ";".join(f"{i},{j}" for i, j in sorted(pair_set))


# -- torus and surgered potentials ----------------------------------------


def _z1(n: int, j: int, quantum: RationalFunction) -> RationalFunction:
    # the slot one past the top row is, by convention, the quantum monomial
    if j == n - 1:
        return quantum
    return RationalFunction.var(f"z1_{j}")


def _z2(j: int) -> RationalFunction:
    # the slot before the bottom row starts is, by convention, 1
    if j == 0:
        return _ONE
    return RationalFunction.var(f"z2_{j}")


def _torus_terms(n: int, quantum: RationalFunction) -> list[RationalFunction]:
    terms = [_z2(1), quantum / _z1(n, n - 2, quantum)]
    for j in range(1, n - 2):
        terms.append(_z1(n, j + 1, quantum) / _z1(n, j, quantum))
        terms.append(_z2(j + 1) / _z2(j))
    for j in range(1, n - 1):
        terms.append(_z1(n, j, quantum) / _z2(j))
    return terms


def torus_terms(n: int) -> list[RationalFunction]:
    """The Laurent monomials of the torus potential, in display order."""
    if n < 4:
        raise ValueError("need n >= 4")
    return _torus_terms(n, _T**n)


def gc_torus_potential(n: int) -> Potential:
    """Disk potential of the monotone torus fiber: one term per facet."""
    variables = tuple(f"z1_{j}" for j in range(1, n - 1)) + tuple(
        f"z2_{j}" for j in range(1, n - 1)
    )
    return Potential(_sum(torus_terms(n)), "torus", variables, f"gr(2,{n})")


def _removed_terms(n: int, i: int, quantum) -> list[RationalFunction]:
    return [
        _z1(n, i + 2, quantum) / _z1(n, i + 1, quantum),
        _z1(n, i + 1, quantum) / _z1(n, i, quantum),
        _z2(i + 1) / _z2(i),
        _z1(n, i + 1, quantum) / _z2(i + 1),
        _z1(n, i, quantum) / _z2(i),
        _z2(i) / _z2(i - 1),
    ]


def _inserted_terms(n: int, i: int, quantum) -> list[RationalFunction]:
    u = RationalFunction.var(f"u{i}")
    v = RationalFunction.var(f"v{i}")
    return [
        u,
        u * _z1(n, i, quantum) / _z2(i + 1),
        v * _z2(i + 1) / _z2(i - 1),
        v * _z1(n, i + 2, quantum) / ((u * v - 1) * _z1(n, i, quantum)),
    ]


def _surgered_terms(n: int, pair_set, quantum) -> list[RationalFunction]:
    terms = _torus_terms(n, quantum)
    for i, _ in sorted(pair_set):
        for target in _removed_terms(n, i, quantum):
            for k, t in enumerate(terms):
                if t == target:
                    del terms[k]
                    break
            else:
                raise RuntimeError(f"term scheduled for removal is absent: {target}")
        terms.extend(_inserted_terms(n, i, quantum))
    return terms


def immersed_terms(n: int, pair_set) -> list[RationalFunction]:
    """Terms of the surgered potential for one admissible set of pairs."""
    pair_set = _validate_pairs(n, pair_set)
    return _surgered_terms(n, pair_set, _T**n)


def immersed_chart_variables(n: int, pair_set) -> tuple[str, ...]:
    pair_set = _validate_pairs(n, pair_set)
    dropped1 = {i + 1 for i, _ in pair_set}
    dropped2 = {i for i, _ in pair_set}
    names: list[str] = []
    for i, _ in sorted(pair_set):
        names += [f"u{i}", f"v{i}"]
    names += [f"z1_{j}" for j in range(1, n - 1) if j not in dropped1]
    names += [f"z2_{j}" for j in range(1, n - 1) if j not in dropped2]
    return tuple(names)


def immersed_potential(n: int, pair_set) -> Potential:
    """Disk potential of the immersed Lagrangian selected by the pair set."""
    pair_set = _validate_pairs(n, pair_set)
    chart = "torus" if not pair_set else f"immersed[{_pairs_label(pair_set)}]"
    return Potential(
        _sum(immersed_terms(n, pair_set)),
        chart,
        immersed_chart_variables(n, pair_set),
        f"gr(2,{n})",
    )


# -- the four-variable local model charts ---------------------------------


def gr24_chart_potentials() -> tuple[Potential, Potential, Potential]:
    """Immersed chart and its two smoothings for the smallest Grassmannian."""
    immersed = parse("v/((u*v - 1)*z0) + u + u*z0/w0 + v*w0")
    chekanov = parse("1/(x1*y1*z1) + 1/(y1*z1) + y1 + y1*z1/w1 + x1*w1/y1 + w1/y1")
    clifford = parse("1/(x2*y2*z2) + y2 + x2*y2 + x2*y2*z2/w2 + y2*z2/w2 + w2/y2")
    model = "gr(2,4)"
    return (
        Potential(immersed, "immersed", ("u", "v", "z0", "w0"), model),
        Potential(chekanov, "chekanov", ("x1", "y1", "z1", "w1"), model),
        Potential(clifford, "clifford", ("x2", "y2", "z2", "w2"), model),
    )


class OgPotentials(NamedTuple):
    immersed: Potential
    chekanov: Potential
    clifford: Potential
    toric_fiber: Potential
    rietsch: Potential
    og14: Potential


def og_potentials() -> OgPotentials:
    """The six potentials of the quadric models, smallest cases."""
    five = "og(1,5)"
    return OgPotentials(
        immersed=Potential(
            parse("v + v*z0 + u^2/(z0*(u*v - 1))"), "immersed", ("u", "v", "z0"), five
        ),
        chekanov=Potential(
            parse("1/y1 + x1/y1 + z1/y1 + x1*z1/y1 + y1^2/(x1*z1)"),
            "chekanov",
            ("x1", "y1", "z1"),
            five,
        ),
        clifford=Potential(
            parse("1/y2 + z2/y2 + y2^2*(x2 + 1)^2/(x2*z2)"),
            "clifford",
            ("x2", "y2", "z2"),
            five,
        ),
        toric_fiber=Potential(
            parse("1/y1_3 + y1_3/y1_2 + (y1_2/y1_1)*(1 + y1_1)^2"),
            "toric-fiber",
            ("y1_1", "y1_2", "y1_3"),
            five,
        ),
        rietsch=Potential(
            parse("p1/p0 + p2^2/(p1*p2 - p0*p3) + q*p1/p3"),
            "plucker",
            ("p0", "p1", "p2", "p3"),
            five,
        ),
        og14=Potential(
            parse("(y1_2/y1_1)*(1 + y1_1)^2"),
            "wallcrossed",
            ("y1_1", "y1_2"),
            "og(1,4)",
        ),
    )


def og_bridge() -> dict[str, RationalFunction]:
    """Clifford-chart coordinates as functions on the degenerate fiber torus."""
    return {
        "x2": parse("y1_1"),
        "y2": parse("y1_3"),
        "z2": parse("y1_3^2/y1_2"),
    }


def og15_recovery_bindings() -> dict[str, RationalFunction]:
    """Chart coordinates of the quadric threefold as homogeneous-coordinate
    ratios; all three charts restrict to the same potential under these."""
    p0, p1, p2, p3 = (RationalFunction.var(f"p{k}") for k in range(4))
    x = (p1 * p2 - p0 * p3) / (p0 * p3)
    return {
        "u": p2 / p3,
        "v": p1 / p0,
        "z0": p0 / p3,
        "x1": x,
        "y1": p2 / p3,
        "z1": p0 / p3,
        "x2": x,
        "y2": p0 / p1,
        "z2": p0 / p3,
    }


# -- homogeneous-coordinate potentials ------------------------------------


def _rietsch_terms(n: int) -> list[RationalFunction]:
    if n < 4:
        raise ValueError("need n >= 4")

    def pv(i: int, j: int) -> RationalFunction:
        return RationalFunction.var(pvar(i, j))

    terms = [_Q * pv(2, n) / pv(1, 2)]
    for j in range(2, n):
        terms.append(pv(j - 1, j + 1) / pv(j, j + 1))
    terms.append(pv(1, n - 1) / pv(1, n))
    return terms


def rietsch_gr(n: int) -> Potential:
    """Quantum-period superpotential in homogeneous coordinates; all
    denominators are frozen variables."""
    terms = _rietsch_terms(n)
    expr = _sum(terms)
    variables = tuple(v for v in expr.variables() if v != "q")
    return Potential(expr, "plucker", variables, f"gr(2,{n})")


def _monomial_exponent(t: RationalFunction, name: str) -> int:
    if t.factors or len(t.num.terms) != 1:
        raise ValueError("expected a Laurent monomial")
    if name not in t.num.vars:
        return 0
    k = t.num.vars.index(name)
    (exps,) = t.num.terms
    return exps[k]


@lru_cache(maxsize=None)
def _restricted_terms(n: int, pair_set: frozenset) -> tuple[RationalFunction, ...]:
    empty = geometric_to_plucker(n, frozenset())
    terms = [t.substitute(empty.bindings) for t in _torus_terms(n, _Q)]
    for i, _ in sorted(pair_set):
        b = n - i - 2
        cleared = pvar(n - i - 1, n)
        # three-term quadratic relation on (b, b+1, b+2, n), solved for the
        # product containing the coordinate being cleared
        binom = RationalFunction.var(pvar(b, b + 1)) * RationalFunction.var(
            pvar(b + 2, n)
        ) + RationalFunction.var(pvar(b, n)) * RationalFunction.var(pvar(b + 1, b + 2))
        ratio = (
            RationalFunction.var(pvar(b, b + 2)) * RationalFunction.var(cleared) / binom
        )
        keep = [t for t in terms if _monomial_exponent(t, cleared) >= 0]
        bad = [t for t in terms if _monomial_exponent(t, cleared) < 0]
        merged: list[RationalFunction] = []
        while bad:
            t1 = bad.pop(0)
            hits = []
            for k, t2 in enumerate(bad):
                rep = (t1 + t2) * ratio
                if rep.factors or len(rep.num.terms) != 1:
                    continue
                if _monomial_exponent(rep, cleared) < 0:
                    continue
                hits.append((k, rep))
            if len(hits) != 1:
                raise RuntimeError(
                    f"clearing {cleared} failed: {len(hits)} candidate reductions"
                )
            k, rep = hits[0]
            del bad[k]
            merged.append(rep)
        terms = keep + merged
    return tuple(terms)


@lru_cache(maxsize=None)
def _restricted_checked(n: int, pair_set: frozenset) -> bool:
    return sum_equal_mod_plucker(
        _restricted_terms(n, pair_set), _rietsch_terms(n), n
    )


def rietsch_restrict(n: int, pair_set, check: bool = True) -> Potential:
    """Torus-chart form of the homogeneous potential, with the coordinates
    the selected chart allows to vanish cleared out of all denominators."""
    pair_set = _validate_pairs(n, pair_set)
    terms = _restricted_terms(n, pair_set)
    if check and not _restricted_checked(n, pair_set):
        raise RuntimeError("cleared potential disagrees with the homogeneous one")
    expr = _sum(terms)
    base = "torus" if not pair_set else f"immersed[{_pairs_label(pair_set)}]"
    variables = tuple(v for v in expr.variables() if v != "q")
    return Potential(expr, f"plucker:{base}", variables, f"gr(2,{n})")


def restricted_terms(n: int, pair_set) -> list[RationalFunction]:
    """Terms of the cleared homogeneous potential, as Laurent monomials."""
    pair_set = _validate_pairs(n, pair_set)
    return list(_restricted_terms(n, pair_set))


# -- valuation dressing and the headline identity -------------------------


def valuation_adjust(p: Potential, tmap: Mapping[str, int]) -> Potential:
    """Rescale each listed variable by the stated power of T; exact."""
    bindings = {
        name: _T ** int(k) * RationalFunction.var(name) for name, k in tmap.items()
    }
    return Potential(p.expr.substitute(bindings), p.chart, p.variables, p.model)


def staircase_tmap(n: int, pair_set=frozenset()) -> dict[str, int]:
    """The dressing that gives every potential term T-valuation one: row-1
    depth grows along the column, each u carries one unit, each v gives one
    back."""
    pair_set = _validate_pairs(n, pair_set)
    dic = geometric_to_plucker(n, pair_set)
    return {name: -k for name, k in dic.tpowers.items()}


def _parse_model(model: str) -> tuple[str, int]:
    text = model.strip().lower().replace(" ", "")
    m = re.fullmatch(r"gr\(2,(\d+)\)", text)
    if m:
        n = int(m.group(1))
        if n < 4:
            raise ValueError("need n >= 4")
        return "gr", n
    if text in {"og15", "og(1,5)"}:
        return "og15", 5
    if text in {"og14", "og(1,4)"}:
        return "og14", 4
    raise ValueError(f"unknown model: {model!r}")


def verify_rietsch_identity(model: str, pair_set=frozenset()) -> bool:
    """Check that the disk potential, pushed through the chart dictionary,
    agrees with the homogeneous-coordinate potential.

    For the Grassmannian models the comparison runs modulo the quadratic
    coordinate relations with q identified with T^n.  For the quadric
    threefold the identity is an exact rational one at q = 1.
    """
    kind, n = _parse_model(model)
    if kind == "gr":
        pair_set = _validate_pairs(n, pair_set)
        dic = geometric_to_plucker(n, pair_set)
        floer = [
            t.substitute(dic.bindings) for t in immersed_terms(n, pair_set)
        ]
        target = [
            t.substitute({"q": _T**n})
            for t in restricted_terms(n, pair_set)
        ]
        return sum_equal_mod_plucker(floer, target, n) and _restricted_checked(
            n, pair_set
        )
    if kind == "og15":
        og = og_potentials()
        floer = og.immersed.expr.substitute(og15_recovery_bindings())
        return floer.equal(og.rietsch.expr.substitute({"q": _ONE}))
    raise ValueError(f"no homogeneous-coordinate identity for model {model!r}")
