"""Plucker-coordinate algebra for the Grassmannian of planes in n-space.

Coordinates are the 2x2 minors p_{i,j} (1 <= i < j <= n), spelled as
variables ``p_i,j``.  Identities that should hold modulo the quadratic
minor relations are checked by pulling everything back along the generic
parametrization p_{i,j} = a_i b_j - a_j b_i: the parametrization is onto
the cone of decomposable tensors, and the relation ideal is prime, so a
rational identity holds on the cone exactly when it holds after the pull
back.  That check is exact and needs no Groebner machinery.

Points live on the open piece where all cyclically consecutive
coordinates p_{1,2}, ..., p_{n-1,n}, p_{1,n} are nonzero.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .laurent import LaurentPoly
from .rational import RationalFunction, as_rational

Pair = tuple[int, int]

__all__ = [
    "ChartDictionary",
    "CoveringReport",
    "GrassmannPoint",
    "chart_membership",
    "covering_certificate",
    "covering_check",
    "cyclic_pairs",
    "dual_indices",
    "dual_pair",
    "equal_mod_plucker",
    "geometric_to_plucker",
    "parametrize",
    "plucker_relation",
    "pvar",
    "random_point",
    "sum_equal_mod_plucker",
    "var_pair",
]


def pvar(i: int, j: int) -> str:
    if not 1 <= i < j:
        raise ValueError(f"need 1 <= i < j, got ({i}, {j})")
    return f"p_{i},{j}"


def var_pair(name: str) -> Pair:
    if not name.startswith("p_"):
        raise ValueError(f"not a coordinate name: {name!r}")
    i, j = name[2:].split(",")
    return int(i), int(j)


def cyclic_pairs(n: int) -> tuple[Pair, ...]:
    """The index pairs whose coordinates are required nonzero."""
    return tuple((j, j + 1) for j in range(1, n)) + ((1, n),)


def plucker_relation(i: int, j: int, k: int, l: int, n: int) -> LaurentPoly:
    """The three-term quadric on the chosen index quadruple."""
    if not 1 <= i < j < k < l <= n:
        raise ValueError(f"need 1 <= i < j < k < l <= n, got {(i, j, k, l)} with n={n}")

    def m(a: Pair, b: Pair) -> LaurentPoly:
        return LaurentPoly.var(pvar(*a)) * LaurentPoly.var(pvar(*b))

    return m((i, j), (k, l)) - m((i, k), (j, l)) + m((i, l), (j, k))


def dual_indices(n: int, pair: Pair) -> tuple[int, ...]:
    i, j = pair
    if not 1 <= i < j <= n:
        raise ValueError(f"bad pair {pair} for n={n}")
    return tuple(k for k in range(1, n + 1) if k not in (i, j))


def dual_pair(n: int, indices: tuple[int, ...]) -> Pair:
    missing = sorted(set(range(1, n + 1)) - set(indices))
    if len(missing) != 2 or len(set(indices)) != n - 2:
        raise ValueError(f"not a complementary index set for n={n}: {indices}")
    return missing[0], missing[1]


# -- identity checking ----------------------------------------------------


def _generic_minors(n: int) -> dict[str, RationalFunction]:
    out = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        ai_bj = LaurentPoly.var(f"a{i}") * LaurentPoly.var(f"b{j}")
        aj_bi = LaurentPoly.var(f"a{j}") * LaurentPoly.var(f"b{i}")
        out[pvar(i, j)] = as_rational(ai_bj - aj_bi)
    return out


def parametrize(expr, n: int) -> RationalFunction:
    """Pull an expression in the p-variables back to generic 2xn data.

    Every p_{i,j} becomes a_i b_j - a_j b_i; all other variables (q, T)
    pass through untouched.
    """
    f = as_rational(expr)
    try:
        return f.substitute(_generic_minors(n))
    except ZeroDivisionError:
        raise ValueError("expression undefined on the Grassmannian") from None


def equal_mod_plucker(e1, e2, n: int) -> bool:
    """Equality of rational expressions as functions on the minor cone."""
    return parametrize(e1, n).equal(parametrize(e2, n))


def sum_equal_mod_plucker(terms1, terms2, n: int) -> bool:
    """Equality of two term sums as functions on the minor cone.

    Structurally equal terms on the two sides are cancelled before the
    pull back, and the survivors are combined over a single common
    denominator.  This avoids normalizing the full sums, which is much
    larger work than the final zero test.
    """
    from collections import Counter

    count: Counter = Counter()
    for t in terms1:
        count[as_rational(t)] += 1
    for t in terms2:
        count[as_rational(t)] -= 1
    parts = [
        (parametrize(t, n), m) for t, m in count.items() if m
    ]
    lcm: dict = {}
    for p, _ in parts:
        for f, m in p.factors:
            k = f.key()
            if k not in lcm or lcm[k][1] < m:
                lcm[k] = (f, m)
    total = LaurentPoly((), {})
    for p, mult in parts:
        have = {f.key(): m for f, m in p.factors}
        cof = p.num * LaurentPoly.constant(mult)
        for k, (f, m) in lcm.items():
            dm = m - have.get(k, 0)
            if dm:
                cof = cof * f**dm
        total = total + cof
    return total.is_zero()


# -- the geometric dictionaries ------------------------------------------


@dataclass(frozen=True)
class ChartDictionary:
    """Bindings from chart variables to p-ratios, with valuation factors.

    ``bindings`` substitutes each surviving chart variable by a ratio of
    coordinates; composed with a potential it produces a function of the
    p-variables.  ``tpowers`` records, per variable, the power k such
    that the unit-valuation chart coordinate is T^k times the bound
    ratio.  ``q_power`` is the power of T the quantum parameter carries.
    """

    n: int
    pair_set: frozenset
    bindings: dict[str, RationalFunction] = field(compare=False)
    tpowers: dict[str, int] = field(compare=False)
    q_power: int = field(default=0, compare=False)


def _ratio(num: Pair, den: Pair) -> RationalFunction:
    return as_rational(LaurentPoly.var(pvar(*num))) / as_rational(
        LaurentPoly.var(pvar(*den))
    )


def geometric_to_plucker(n: int, pair_set: frozenset) -> ChartDictionary:
    """Dictionary sending surviving chart variables into p-ratios.

    Torus directions keep z-variables; each chosen pair (i, i+1) trades
    two of them for the immersed pair u_i, v_i.  Valuation factors follow
    the staircase: row-1 column j sits at depth j+1, row-2 column j at
    depth j, each u at 1, each v at -1.
    """
    from .ladder import index_sets

    valid, _ = index_sets(n)
    pair_set = frozenset(pair_set)
    if pair_set not in valid:
        raise ValueError(f"not a valid pair set for n={n}: {sorted(pair_set)}")
    dropped_row1 = {i + 1 for i, _ in pair_set}
    dropped_row2 = {i for i, _ in pair_set}
    bindings: dict[str, RationalFunction] = {}
    tpowers: dict[str, int] = {}
    for j in range(1, n - 1):
        if j not in dropped_row1:
            bindings[f"z1_{j}"] = _ratio((n - j - 1, n - j), (n - j, n))
            tpowers[f"z1_{j}"] = -(j + 1)
        if j not in dropped_row2:
            bindings[f"z2_{j}"] = _ratio((n - j - 1, n), (n - 1, n))
            tpowers[f"z2_{j}"] = -j
    for i, _ in sorted(pair_set):
        bindings[f"u{i}"] = _ratio((n - i - 2, n - i), (n - i - 1, n - i))
        tpowers[f"u{i}"] = -1
        bindings[f"v{i}"] = _ratio((n - i - 1, n), (n - i - 2, n))
        tpowers[f"v{i}"] = 1
    return ChartDictionary(n, pair_set, bindings, tpowers, q_power=n)


# -- points ---------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannPoint:
    """A plane through the origin, recorded by its minors.

    Exact points carry Fractions and satisfy the relations identically;
    numeric points carry complex values, checked to double precision.
    """

    n: int
    values: dict[Pair, object] = field(compare=False)

    NUMERIC_TOL = 1e-10

    @classmethod
    def from_vectors(cls, n, top, bottom, require_open: bool = True) -> "GrassmannPoint":
        if len(top) != n or len(bottom) != n:
            raise ValueError("need two coordinate rows of length n")
        vals = {}
        for i, j in itertools.combinations(range(1, n + 1), 2):
            vals[(i, j)] = top[i - 1] * bottom[j - 1] - top[j - 1] * bottom[i - 1]
        pt = cls(n, vals)
        if require_open and not pt.in_open_part():
            raise ValueError("point lies on the forbidden divisor")
        return pt

    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, int)) for v in self.values.values())

    def scale(self) -> float:
        return max(abs(complex(v)) for v in self.values.values())

    def in_open_part(self) -> bool:
        if self.is_exact():
            return all(self.values[p] != 0 for p in cyclic_pairs(self.n))
        tol = self.NUMERIC_TOL * max(self.scale(), 1.0)
        return all(abs(complex(self.values[p])) > tol for p in cyclic_pairs(self.n))

    def relation_defects(self):
        for quad in itertools.combinations(range(1, self.n + 1), 4):
            i, j, k, l = quad
            v = self.values
            yield quad, v[(i, j)] * v[(k, l)] - v[(i, k)] * v[(j, l)] + v[(i, l)] * v[(j, k)]

    def satisfies_relations(self) -> bool:
        if self.is_exact():
            return all(d == 0 for _, d in self.relation_defects())
        tol = self.NUMERIC_TOL * max(self.scale(), 1.0) ** 2
        return all(abs(complex(d)) <= tol for _, d in self.relation_defects())

    def to_json(self) -> str:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, int):
                return str(v)
            c = complex(v)
            return [c.real, c.imag]

        return json.dumps(
            {"n": self.n, "p": {f"{i},{j}": enc(v) for (i, j), v in sorted(self.values.items())}}
        )

    @classmethod
    def from_json(cls, text: str) -> "GrassmannPoint":
        raw = json.loads(text)
        vals = {}
        for key, v in raw["p"].items():
            i, j = key.split(",")
            vals[(int(i), int(j))] = (
                complex(v[0], v[1]) if isinstance(v, list) else Fraction(v)
            )
        return cls(int(raw["n"]), vals)


def random_point(n: int, seed: int) -> GrassmannPoint:
    """Deterministic pseudo-random exact point off the divisor."""
    rng = random.Random(seed)

    def draw():
        num = 0
        while num == 0:
            num = rng.randint(-9, 9)
        return Fraction(num, rng.randint(1, 9))

    for _ in range(1000):
        top = [draw() for _ in range(n)]
        bottom = [draw() for _ in range(n)]
        try:
            return GrassmannPoint.from_vectors(n, top, bottom)
        except ValueError:
            continue
    raise RuntimeError("could not sample a point off the divisor")


def chart_membership(pt: GrassmannPoint, pair_set: frozenset) -> bool:
    """Whether the point lies in the chart attached to the pair set.

    The chart waives the nonvanishing requirement on p_{n-i-1,n} exactly
    for the chosen pairs (i, i+1); all other such coordinates must be
    nonzero.  Larger pair sets therefore give larger charts.
    """
    n = pt.n
    chosen = {i for i, _ in pair_set}
    if pt.is_exact():
        def nonzero(v):
            return v != 0
    else:
        tol = GrassmannPoint.NUMERIC_TOL * max(pt.scale(), 1.0)

        def nonzero(v):
            return abs(complex(v)) > tol

    return all(
        nonzero(pt.values[(n - i - 1, n)])
        for i in range(1, n - 2)
        if i not in chosen
    )


# -- covering -------------------------------------------------------------


@dataclass
class CoveringReport:
    n: int
    samples: int
    failures: list
    degenerate_checked: int
    degenerate_failures: list

    @property
    def ok(self) -> bool:
        return not self.failures and not self.degenerate_failures


def _degenerate_point(n: int, zero_rows: set[int]) -> GrassmannPoint:
    # column k parallel to column n kills exactly the minor (k, n)
    top = [Fraction(1) if i in zero_rows or i == n else Fraction(i) for i in range(1, n + 1)]
    bottom = [Fraction(0) if i in zero_rows or i == n else Fraction(1) for i in range(1, n + 1)]
    return GrassmannPoint.from_vectors(n, top, bottom)


def covering_check(n: int, num_samples: int, seed: int) -> CoveringReport:
    """Sampling falsification test of the maximal-chart covering.

    Random points off the divisor, plus one engineered point per possible
    single vanishing p_{k,n}, must each land in some maximal chart.
    """
    from .ladder import index_sets

    _, maximal = index_sets(n)
    failures = []
    for s in range(num_samples):
        pt = random_point(n, seed + s)
        if not any(chart_membership(pt, m) for m in maximal):
            failures.append(json.loads(pt.to_json()))
    degenerate_failures = []
    checked = 0
    for k in range(2, n - 1):
        pt = _degenerate_point(n, {k})
        checked += 1
        assert pt.values[(k, n)] == 0
        if not any(chart_membership(pt, m) for m in maximal):
            degenerate_failures.append(json.loads(pt.to_json()))
    return CoveringReport(n, num_samples, failures, checked, degenerate_failures)


def covering_certificate(n: int) -> list[dict]:
    """Exhaustive cover proof by vanishing patterns, for small n.

    On the open part, two cyclically consecutive p_{k,n} cannot both
    vanish (the three-term relation propagates the zero to a forbidden
    coordinate), so the vanishing pattern of (p_{2,n}, ..., p_{n-2,n}) is
    an independent set in a path.  Chart membership depends only on that
    pattern, so checking every independent pattern settles the cover.
    Each pattern is realized by an explicit point as a sanity check.
    """
    from .ladder import index_sets

    if n > 7:
        raise ValueError("certificate enumerated only for small n")
    _, maximal = index_sets(n)
    ks = list(range(2, n - 1))
    rows = []
    for size in range(len(ks) + 1):
        for zeros in itertools.combinations(ks, size):
            if any(b - a == 1 for a, b in zip(zeros, zeros[1:])):
                continue  # not realizable off the divisor
            pt = _degenerate_point(n, set(zeros))
            assert pt.satisfies_relations()
            assert all((pt.values[(k, n)] == 0) == (k in zeros) for k in ks)
            covered_by = [m for m in maximal if chart_membership(pt, m)]
            rows.append(
                {
                    "vanishing": list(zeros),
                    "covered": bool(covered_by),
                    "charts": [sorted(m) for m in covered_by],
                }
            )
    return rows
