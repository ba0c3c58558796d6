"""Exact rational functions built on LaurentPoly.

Canonical form kept by every constructor and operation:

* the denominator is a true polynomial (no negative exponents) with no
  monomial content; Laurent units always live in the numerator,
* the denominator has coprime integer coefficients and its lex-first term
  has a positive coefficient,
* no tracked denominator factor divides the numerator exactly.

Denominators are stored as a multiset of factors so that sums and products
cancel shared factors by exact trial division instead of a general gcd.
A bounded single-main-variable gcd pass catches the remaining shared
factors; it gives up (harmlessly) past a fixed size cap, so normalization
stays fast and deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .laurent import LaurentPoly, format_poly, tokenize

_GCD_TERM_CAP = 240


class RationalFunction:
    __slots__ = ("num", "factors", "_den", "_hash")

    def __init__(self, num: LaurentPoly, factors: tuple[tuple[LaurentPoly, int], ...]):
        # Trusted constructor; use make()/as_rational() from outside.
        self.num = num
        self.factors = factors
        self._den = None
        self._hash = None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def make(num: LaurentPoly, raw_factors: Sequence[tuple[LaurentPoly, int]] = ()) -> "RationalFunction":
        """Normalize numerator/denominator-factor data into canonical form."""
        merged: dict = {}
        for f, m in raw_factors:
            if m == 0:
                continue
            if m < 0:
                raise ValueError("factor multiplicities must be positive")
            if f.is_zero():
                raise ZeroDivisionError("zero denominator")
            f, unit = _normalize_factor(f)
            if unit is not None:
                num = num * unit ** m if m != 1 else num * unit
            if f is None:
                continue
            merged[f.key()] = (f, merged.get(f.key(), (f, 0))[1] + m)
        if num.is_zero():
            return RationalFunction(LaurentPoly((), {}), ())
        factors = {k: fm for k, fm in merged.items()}
        # exact trial division of the numerator by tracked factors
        changed = True
        while changed and factors:
            changed = False
            for k, (f, m) in list(factors.items()):
                q = num.exact_div(f)
                if q is not None:
                    num = q
                    if m == 1:
                        del factors[k]
                    else:
                        factors[k] = (f, m - 1)
                    changed = True
        # bounded gcd pass for shared non-unit factors
        changed = True
        while changed and factors:
            changed = False
            for k, (f, m) in list(factors.items()):
                if m != 1 or len(num.terms) == 1:
                    continue
                g = poly_gcd(num, f)
                if g.is_constant():
                    continue
                num = num.exact_div(g)
                rest = f.exact_div(g)
                del factors[k]
                rest, unit = _normalize_factor(rest)
                if unit is not None:
                    num = num * unit
                if rest is not None:
                    factors[rest.key()] = (rest, factors.get(rest.key(), (rest, 0))[1] + 1)
                changed = True
                break
        ordered = tuple(sorted(factors.values(), key=lambda fm: fm[0].key()))
        return RationalFunction(num, ordered)

    @staticmethod
    def from_poly(p: LaurentPoly) -> "RationalFunction":
        return RationalFunction.make(p, ())

    @staticmethod
    def constant(c) -> "RationalFunction":
        return RationalFunction.make(LaurentPoly.constant(Fraction(c)), ())

    @staticmethod
    def var(name: str) -> "RationalFunction":
        return RationalFunction.make(LaurentPoly.var(name), ())

    # -- basic structure --------------------------------------------------

    @property
    def den(self) -> LaurentPoly:
        if self._den is None:
            d = LaurentPoly.constant(1)
            for f, m in self.factors:
                d = d * f ** m
            self._den = d
        return self._den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.factors

    def variables(self) -> tuple[str, ...]:
        seen = set(self.num.vars)
        for f, _ in self.factors:
            seen.update(f.vars)
        return tuple(sorted(seen))

    def __eq__(self, other) -> bool:
        """Structural equality of canonical forms (not value equality)."""
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num.key(), self.den.key()))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        mine = dict((f.key(), (f, m)) for f, m in self.factors)
        theirs = dict((f.key(), (f, m)) for f, m in other.factors)
        lcm: dict = dict(mine)
        for k, (f, m) in theirs.items():
            if k in lcm:
                lcm[k] = (f, max(lcm[k][1], m))
            else:
                lcm[k] = (f, m)
        left = self.num
        right = other.num
        for k, (f, m) in lcm.items():
            dm = m - mine.get(k, (f, 0))[1]
            if dm:
                left = left * f ** dm
            dm = m - theirs.get(k, (f, 0))[1]
            if dm:
                right = right * f ** dm
        return RationalFunction.make(left + right, tuple(lcm.values()))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.factors)

    def __sub__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction.make(
            self.num * other.num, tuple(self.factors) + tuple(other.factors)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_rational(other) * self.inverse()

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        num = LaurentPoly.constant(1)
        for f, m in self.factors:
            num = num * f ** m
        return RationalFunction.make(num, ((self.num, 1),))

    def __pow__(self, n: int) -> "RationalFunction":
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return RationalFunction.constant(1)
        if n < 0:
            return self.inverse() ** (-n)
        num = self.num ** n
        return RationalFunction.make(num, tuple((f, m * n) for f, m in self.factors))

    # -- the contract operations ------------------------------------------

    def equal(self, other) -> bool:
        """Exact value equality, decided by cross-multiplication."""
        other = as_rational(other)
        if self == other:
            return True
        mine = dict((f.key(), (f, m)) for f, m in self.factors)
        theirs = dict((f.key(), (f, m)) for f, m in other.factors)
        left = self.num
        right = other.num
        for k, (f, m) in theirs.items():
            shared = min(m, mine.get(k, (f, 0))[1])
            if m - shared:
                left = left * f ** (m - shared)
        for k, (f, m) in mine.items():
            shared = min(m, theirs.get(k, (f, 0))[1])
            if m - shared:
                right = right * f ** (m - shared)
        return (left - right).is_zero()

    def substitute(self, bindings: Mapping[str, object]) -> "RationalFunction":
        """Simultaneously replace variables; unbound variables pass through."""
        vals = {name: as_rational(v) for name, v in bindings.items()}
        out = _substitute_poly(self.num, vals)
        for f, m in self.factors:
            out = out / _substitute_poly(f, vals) ** m
        return out

    def partial(self, name: str) -> "RationalFunction":
        """Exact partial derivative."""
        flist = list(self.factors)
        dnum = self.num.partial(name)
        base = LaurentPoly.constant(1)
        for f, _ in flist:
            base = base * f
        top = dnum * base
        for i, (f, m) in enumerate(flist):
            df = f.partial(name)
            if df.is_zero():
                continue
            rest = LaurentPoly.constant(m)
            for j, (g, _) in enumerate(flist):
                if j != i:
                    rest = rest * g
            top = top - self.num * df * rest
        return RationalFunction.make(top, tuple((f, m + 1) for f, m in flist))

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate numerically (complex/float) or exactly (Fraction)."""
        total = self.num.evaluate(point)
        for f, m in self.factors:
            v = f.evaluate(point)
            if v == 0:
                raise ZeroDivisionError(f"denominator factor vanishes at the point: {format_poly(f)}")
            total = total / v ** m
        return total

    def rename(self, mapping: Mapping[str, str]) -> "RationalFunction":
        return RationalFunction.make(
            self.num.rename(mapping),
            tuple((f.rename(mapping), m) for f, m in self.factors),
        )

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.factors:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


def _normalize_factor(f: LaurentPoly):
    """Split a factor into (canonical factor or None, unit to push to the numerator)."""
    units = []
    mono = f.monomial_gcd()
    if any(mono):
        orig_vars = f.vars
        f = f.shift(tuple(-x for x in mono))
        units.append(LaurentPoly.make(orig_vars, {tuple(-x for x in mono): Fraction(1)}))
    c = f.content()
    lead_e = max(f.terms)
    if f.terms[lead_e] < 0:
        c = -c
    if c != 1:
        f = f.scale(1 / c)
        units.append(LaurentPoly.constant(1 / c))
    if f.is_constant():
        v = f.constant_value()
        if v != 1:
            units.append(LaurentPoly.constant(1 / v))
        f = None
    unit = None
    for u in units:
        unit = u if unit is None else unit * u
    return f, unit


def _substitute_poly(p: LaurentPoly, vals: Mapping[str, "RationalFunction"]) -> "RationalFunction":
    if not any(v in vals for v in p.vars):
        return RationalFunction.from_poly(p)
    power_cache: dict[tuple[str, int], RationalFunction] = {}

    def power(name: str, k: int) -> RationalFunction:
        got = power_cache.get((name, k))
        if got is None:
            base = vals.get(name)
            if base is None:
                got = RationalFunction.from_poly(LaurentPoly.var(name, k))
            else:
                got = base ** k
            power_cache[(name, k)] = got
        return got

    total = RationalFunction.constant(0)
    for e, c in p.terms.items():
        term = RationalFunction.constant(c)
        for name, k in zip(p.vars, e):
            if k:
                term = term * power(name, k)
        total = total + term
    return total


def as_rational(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFunction.from_poly(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunction.constant(x)
    if isinstance(x, str):
        return parse(x)
    return NotImplemented


# -- bounded polynomial gcd -----------------------------------------------


class _OutOfWork(Exception):
    pass


class _Work:
    """Shared charge counter for one top-level gcd computation.

    The pseudo-remainder sequence recurses on coefficient contents, and
    that tree can blow up in several variables even when every node stays
    under the term cap.  A single budget across the whole tree keeps the
    worst case bounded.
    """

    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self, n: int):
        self.left -= n
        if self.left < 0:
            raise _OutOfWork


_GCD_WORK_CAP = 4000


def poly_gcd(f: LaurentPoly, g: LaurentPoly, cap: int = _GCD_TERM_CAP) -> LaurentPoly:
    """Non-unit common factor of two polynomials, or 1.

    Runs a primitive pseudo-remainder sequence in one main variable at a
    time, recursing on coefficient contents.  Gives up (returns 1) when a
    term-count cap or a global work budget is exceeded; the result is
    always verified by exact division, so a bail-out can only miss a
    cancellation, never corrupt the value.
    """
    try:
        return _poly_gcd(f, g, cap, _Work(_GCD_WORK_CAP))
    except _OutOfWork:
        return LaurentPoly.constant(1)


def _poly_gcd(f: LaurentPoly, g: LaurentPoly, cap: int, work: _Work) -> LaurentPoly:
    if f.is_zero() or g.is_zero() or f.is_monomial() or g.is_monomial():
        return LaurentPoly.constant(1)
    work.spend(len(f.terms) + len(g.terms))
    f = f.shift(tuple(-x for x in f.monomial_gcd()))
    g = g.shift(tuple(-x for x in g.monomial_gcd()))
    shared = sorted(set(f.vars) & set(g.vars))
    if not shared:
        return LaurentPoly.constant(1)
    best = min(shared, key=lambda v: f.degree_in(v)[1] + g.degree_in(v)[1])
    result = _gcd_in_var(f, g, best, cap, work)
    if result.is_constant() or result.is_monomial():
        return LaurentPoly.constant(1)
    # a useful common factor is no bigger than either input
    if len(result.terms) > max(len(f.terms), len(g.terms)):
        return LaurentPoly.constant(1)
    if f.exact_div(result) is None or g.exact_div(result) is None:
        return LaurentPoly.constant(1)
    return result


def _univ(p: LaurentPoly, v: str) -> dict[int, LaurentPoly]:
    """View p as a univariate polynomial in v with polynomial coefficients."""
    i = p.vars.index(v) if v in p.vars else None
    out: dict[int, LaurentPoly] = {}
    rest = tuple(x for x in p.vars if x != v)
    for e, c in p.terms.items():
        if i is None:
            d = 0
            re = e
        else:
            d = e[i]
            re = tuple(x for j, x in enumerate(e) if j != i)
        coeff = out.get(d)
        add = LaurentPoly.make(rest, {re: c})
        out[d] = add if coeff is None else coeff + add
    return {d: c for d, c in out.items() if not c.is_zero()}


def _from_univ(u: dict[int, LaurentPoly], v: str) -> LaurentPoly:
    total = LaurentPoly((), {})
    for d, c in u.items():
        total = total + (c * LaurentPoly.var(v, d) if d else c)
    return total


def _content_of(coeffs, cap, work: _Work) -> LaurentPoly:
    items = list(coeffs)
    if not items:
        return LaurentPoly.constant(1)
    acc = items[0]
    for c in items[1:]:
        if acc.is_constant() or acc.is_monomial():
            return LaurentPoly.constant(1)
        acc = _poly_gcd(acc, c, cap, work)
    if acc.is_monomial():
        return LaurentPoly.constant(1)
    return acc


def _gcd_in_var(f: LaurentPoly, g: LaurentPoly, v: str, cap: int, work: _Work) -> LaurentPoly:
    uf, ug = _univ(f, v), _univ(g, v)
    cf = _content_of(uf.values(), cap, work)
    cg = _content_of(ug.values(), cap, work)
    content_gcd = _poly_gcd(cf, cg, cap, work) if not (cf.is_constant() or cg.is_constant()) else LaurentPoly.constant(1)
    pf = {d: c.exact_div(cf) for d, c in uf.items()} if not cf.is_constant() else uf
    pg = {d: c.exact_div(cg) for d, c in ug.items()} if not cg.is_constant() else ug
    a, b = (pf, pg) if max(pf) >= max(pg) else (pg, pf)
    while b:
        r = _pseudo_rem(a, b, cap, work)
        if r is None:
            return content_gcd
        # strip content to control growth
        if r:
            rc = _content_of(r.values(), cap, work)
            if not rc.is_constant():
                r = {d: c.exact_div(rc) for d, c in r.items()}
        a, b = b, r
    if max(a) == 0:
        return content_gcd
    prim = _from_univ(a, v)
    prim = prim.shift(tuple(-x for x in prim.monomial_gcd()))
    cc = prim.content()
    lead = max(prim.terms)
    if prim.terms[lead] < 0:
        cc = -cc
    prim = prim.scale(1 / cc)
    return content_gcd * prim


_GCD_BIT_CAP = 20000


def _coeff_bits(p: LaurentPoly) -> int:
    return max((c.numerator.bit_length() + c.denominator.bit_length() for c in p.terms.values()), default=0)


def _pseudo_rem(a: dict[int, LaurentPoly], b: dict[int, LaurentPoly], cap: int, work: _Work):
    da, db = max(a), max(b)
    lb = b[db]
    nb = sum(len(c.terms) for c in b.values())
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        # pre-charge the term-product count of the coming round, and refuse
        # runaway integer growth: pseudo-remainders can square coefficient
        # sizes every step
        size_in = sum(len(c.terms) for c in r.values())
        work.spend(size_in * len(lb.terms) + nb * len(lr.terms) + 1)
        if _coeff_bits(lr) + _coeff_bits(lb) > _GCD_BIT_CAP:
            return None
        shift = dr - db
        nxt: dict[int, LaurentPoly] = {}
        for d, c in r.items():
            nxt[d] = c * lb
        for d, c in b.items():
            t = nxt.get(d + shift, LaurentPoly((), {})) - c * lr
            nxt[d + shift] = t
        r = {d: c for d, c in nxt.items() if not c.is_zero()}
        if sum(len(c.terms) for c in r.values()) > cap:
            return None
        if r and max(r) >= dr:  # leading term failed to cancel: bail out
            return None
    return r


# -- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ValueError(f"expected {op!r}, got {val!r}")

    def parse_expr(self) -> RationalFunction:
        node = self.parse_term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.parse_term()
                node = node + rhs if val == "+" else node - rhs
            else:
                return node

    def parse_term(self) -> RationalFunction:
        node = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.parse_factor()
                node = node * rhs if val == "*" else node / rhs
            else:
                return node

    def parse_factor(self) -> RationalFunction:
        sign = 1
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        node = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            node = node ** self.parse_int_exponent()
        return node if sign == 1 else -node

    def parse_int_exponent(self) -> int:
        esign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            if val == "-":
                esign = -1
        kind, val = self.take()
        if kind != "num":
            raise ValueError(f"expected integer exponent, got {val!r}")
        return esign * int(val)

    def parse_atom(self) -> RationalFunction:
        kind, val = self.take()
        if kind == "num":
            return RationalFunction.constant(int(val))
        if kind == "name":
            return RationalFunction.var(val)
        if kind == "op" and val == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ValueError(f"unexpected token {val!r}")


def parse(text: str) -> RationalFunction:
    """Parse the arithmetic grammar into a canonical rational function."""
    tokens = tokenize(text)
    if not tokens:
        raise ValueError("empty expression")
    parser = _Parser(tokens)
    node = parser.parse_expr()
    if parser.pos != len(tokens):
        raise ValueError(f"trailing input near {parser.tokens[parser.pos]!r}")
    return node


def normalize(x) -> RationalFunction:
    """Coerce input (text or algebra objects) into canonical form."""
    return as_rational(x)
