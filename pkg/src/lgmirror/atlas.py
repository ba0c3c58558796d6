"""Chart gluing: wall-crossing transitions, product extensions over a pair
set, composition, cocycle and potential-transport checks, and the gauge
family at the node.

Bindings always send target-chart coordinates to source-chart expressions,
so a potential on the target pulls back along a transition by substitution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .ladder import index_sets
from .potentials import (
    Potential,
    gc_torus_potential,
    gr24_chart_potentials,
    immersed_chart_variables,
    immersed_potential,
    og_bridge,
    og_potentials,
)
from .rational import RationalFunction, as_rational, parse
from .report import Report, Verdict

ATLAS_SCHEMA = "atlas/1"


@dataclass(frozen=True)
class Chart:
    name: str
    variables: tuple[str, ...]
    domain_notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables in chart {self.name!r}")


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    bindings: Mapping[str, RationalFunction]
    constraints: tuple[RationalFunction, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "bindings", {k: as_rational(v) for k, v in self.bindings.items()}
        )
        object.__setattr__(
            self, "constraints", tuple(as_rational(c) for c in self.constraints)
        )


def identity_transition(chart: Chart) -> Transition:
    return Transition(
        chart.name,
        chart.name,
        {v: RationalFunction.var(v) for v in chart.variables},
    )


def compose(t1: Transition, t2: Transition) -> Transition:
    """The transition following t1 by t2; t1 must land where t2 starts."""
    if t1.target != t2.source:
        raise ValueError(
            f"cannot compose {t1.source}->{t1.target} with {t2.source}->{t2.target}"
        )
    bindings = {name: expr.substitute(t1.bindings) for name, expr in t2.bindings.items()}
    constraints = list(t1.constraints)
    seen = {str(c) for c in constraints}
    for c in t2.constraints:
        # nonvanishing survives pullback through its numerator; t1 already
        # guards the denominators introduced by the substitution
        pulled = RationalFunction.from_poly(c.substitute(t1.bindings).num)
        if str(pulled) not in seen:
            seen.add(str(pulled))
            constraints.append(pulled)
    return Transition(t1.source, t2.target, bindings, tuple(constraints))


def extend_identity(t: Transition, extra: tuple[str, ...]) -> Transition:
    bindings = dict(t.bindings)
    for v in extra:
        bindings[v] = RationalFunction.var(v)
    return Transition(t.source, t.target, bindings, t.constraints)


@dataclass
class Atlas:
    name: str
    charts: tuple[Chart, ...]
    transitions: tuple[Transition, ...]
    potentials: dict = field(default_factory=dict)

    def __post_init__(self):
        self.charts = tuple(self.charts)
        self.transitions = tuple(self.transitions)
        names = [c.name for c in self.charts]
        if len(set(names)) != len(names):
            raise ValueError("duplicate chart names")
        by_name = {c.name: c for c in self.charts}
        edges = set()
        for t in self.transitions:
            if t.source not in by_name or t.target not in by_name:
                raise ValueError(f"transition {t.source}->{t.target} off the atlas")
            if t.source == t.target:
                raise ValueError("self-transitions do not belong in an atlas")
            if (t.source, t.target) in edges:
                raise ValueError(f"duplicate transition {t.source}->{t.target}")
            edges.add((t.source, t.target))
            target_vars = set(by_name[t.target].variables)
            if set(t.bindings) != target_vars:
                raise ValueError(
                    f"bindings of {t.source}->{t.target} do not cover the target chart"
                )
            source_vars = set(by_name[t.source].variables)
            for name, expr in t.bindings.items():
                stray = set(expr.variables()) - source_vars
                if stray:
                    raise ValueError(
                        f"binding {name} of {t.source}->{t.target} uses {sorted(stray)}"
                    )
        for chart_name in self.potentials:
            if chart_name not in by_name:
                raise ValueError(f"potential attached to unknown chart {chart_name!r}")
        self._by_name = by_name
        self._edges = {(t.source, t.target): t for t in self.transitions}
        if names:
            seen = {names[0]}
            frontier = [names[0]]
            while frontier:
                here = frontier.pop()
                for s, t in self._edges:
                    for other in ((t,) if s == here else (s,) if t == here else ()):
                        if other not in seen:
                            seen.add(other)
                            frontier.append(other)
            if seen != set(names):
                raise ValueError("transition graph is not connected")

    def chart(self, name: str) -> Chart:
        return self._by_name[name]

    def transition(self, source: str, target: str):
        return self._edges.get((source, target))

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": ATLAS_SCHEMA,
                "name": self.name,
                "charts": [
                    {
                        "name": c.name,
                        "variables": list(c.variables),
                        "domain_notes": c.domain_notes,
                    }
                    for c in self.charts
                ],
                "transitions": [
                    {
                        "source": t.source,
                        "target": t.target,
                        "bindings": {k: str(v) for k, v in sorted(t.bindings.items())},
                        "constraints": [str(c) for c in t.constraints],
                    }
                    for t in self.transitions
                ],
                "potentials": {
                    name: json.loads(p.to_json())
                    for name, p in sorted(self.potentials.items())
                },
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "Atlas":
        data = json.loads(text)
        charts = tuple(
            Chart(c["name"], tuple(c["variables"]), c.get("domain_notes", ""))
            for c in data["charts"]
        )
        transitions = tuple(
            Transition(
                t["source"],
                t["target"],
                {k: parse(v) for k, v in t["bindings"].items()},
                tuple(parse(c) for c in t.get("constraints", ())),
            )
            for t in data["transitions"]
        )
        potentials = {
            name: Potential.from_json(json.dumps(p))
            for name, p in data.get("potentials", {}).items()
        }
        return Atlas(data["name"], charts, transitions, potentials)


# -- verification ----------------------------------------------------------


def verify_cocycle(a: Atlas) -> Report:
    """Every composable triangle must reproduce the direct transition, and
    every two-way edge must compose to the identity."""
    verdicts = []
    for (s, t), forward in sorted(a._edges.items()):
        if s < t and (t, s) in a._edges:
            loop = compose(forward, a._edges[(t, s)])
            bad = [
                v
                for v in a.chart(s).variables
                if not loop.bindings[v].equal(RationalFunction.var(v))
            ]
            verdicts.append(
                Verdict(
                    f"roundtrip {s}<->{t}",
                    not bad,
                    "" if not bad else f"not the identity on {bad}",
                )
            )
    for (s1, mid), t1 in sorted(a._edges.items()):
        for (m2, end), t2 in sorted(a._edges.items()):
            if m2 != mid or end == s1:
                continue
            direct = a._edges.get((s1, end))
            if direct is None:
                continue
            comp = compose(t1, t2)
            bad = [
                v
                for v in sorted(direct.bindings)
                if not comp.bindings[v].equal(direct.bindings[v])
            ]
            verdicts.append(
                Verdict(
                    f"triangle {s1}->{mid}->{end}",
                    not bad,
                    "" if not bad else f"mismatch on {bad}",
                )
            )
    if not verdicts:
        verdicts.append(Verdict("no-triangles", True, "nothing to compose"))
    return Report(f"cocycle[{a.name}]", tuple(verdicts))


def verify_potential_transport(a: Atlas) -> Report:
    """Each potential, pulled back along a transition, must equal the
    potential already living on the source chart."""
    verdicts = []
    for t in a.transitions:
        ws = a.potentials.get(t.source)
        wt = a.potentials.get(t.target)
        if ws is None or wt is None:
            continue
        ok = wt.expr.substitute(t.bindings).equal(ws.expr)
        verdicts.append(
            Verdict(
                f"transport {t.source}->{t.target}",
                ok,
                "" if ok else "pullback disagrees with the source potential",
            )
        )
    if not verdicts:
        verdicts.append(Verdict("no-edges-with-potentials", True, "vacuous"))
    return Report(f"transport[{a.name}]", tuple(verdicts))


# -- the node wall crossings ----------------------------------------------


def local_transitions() -> list[Transition]:
    """The three canonical maps among the node chart and its smoothings."""
    guard = parse("u*v - 1")
    return [
        Transition(
            "immersed", "chekanov", {"x1": parse("u*v - 1"), "y1": parse("u")}, (guard,)
        ),
        Transition(
            "immersed",
            "clifford",
            {"x2": parse("u*v - 1"), "y2": parse("1/v")},
            (guard, parse("v")),
        ),
        Transition(
            "clifford",
            "chekanov",
            {"x1": parse("x2"), "y1": parse("y2*(1 + x2)")},
            (parse("x2 + 1"),),
        ),
    ]


def _local_inverses() -> list[Transition]:
    return [
        Transition(
            "chekanov",
            "immersed",
            {"u": parse("y1"), "v": parse("(x1 + 1)/y1")},
            (parse("y1"),),
        ),
        Transition(
            "clifford",
            "immersed",
            {"u": parse("(1 + x2)*y2"), "v": parse("1/y2")},
            (parse("y2"),),
        ),
        Transition(
            "chekanov",
            "clifford",
            {"x2": parse("x1"), "y2": parse("y1/(1 + x1)")},
            (parse("x1 + 1"),),
        ),
    ]


def gauge_automorphism(k: int) -> Transition:
    """Reparametrization of the node chart that preserves the product u*v."""
    k = int(k)
    scale = parse("1 - u*v")
    bindings = {
        "u": scale**k * RationalFunction.var("u"),
        "v": scale**-k * RationalFunction.var("v"),
    }
    return Transition("immersed", "immersed", bindings, (scale,) if k else ())


def conjugate_chart(
    a: Atlas, chart_name: str, forward: Transition, backward: Transition
) -> Atlas:
    """Reparametrize one chart by an invertible self-map.

    ``forward`` writes the old coordinates in terms of the new ones (so the
    chart's potential pulls back through it); ``backward`` is its inverse.
    """
    for t in (forward, backward):
        if t.source != chart_name or t.target != chart_name:
            raise ValueError("self-map does not live on the named chart")
    new_transitions = []
    for t in a.transitions:
        if t.source == chart_name:
            new_transitions.append(compose(forward, t))
        elif t.target == chart_name:
            new_transitions.append(compose(t, backward))
        else:
            new_transitions.append(t)
    potentials = dict(a.potentials)
    if chart_name in potentials:
        p = potentials[chart_name]
        potentials[chart_name] = Potential(
            p.expr.substitute(forward.bindings), p.chart, p.variables, p.model
        )
    return Atlas(f"{a.name}/regauged", a.charts, tuple(new_transitions), potentials)


def local_model_atlas(perturb_cocycle: bool = False) -> Atlas:
    """Two-variable charts around the node; no potentials attached.

    With ``perturb_cocycle`` the clifford-to-chekanov map gets a spurious
    extra factor, which the cocycle check must flag.
    """
    charts = (
        Chart("immersed", ("u", "v"), "node coordinates; u*v stays away from 1"),
        Chart("chekanov", ("x1", "y1"), "first smoothing; x1 near -1 excluded"),
        Chart("clifford", ("x2", "y2"), "second smoothing"),
    )
    transitions = local_transitions() + _local_inverses()
    if perturb_cocycle:
        transitions[2] = Transition(
            "clifford",
            "chekanov",
            {"x1": parse("x2"), "y1": parse("y2*(1 + x2)^2")},
            (parse("x2 + 1"),),
        )
    return Atlas("local-model", charts, tuple(transitions))


# -- the four-variable and quadric atlases ---------------------------------


def gr24_atlas(flip_sign: bool = False) -> Atlas:
    """The three glued charts of the smallest Grassmannian, with their
    potentials.  ``flip_sign`` negates one term of the chekanov potential,
    which potential transport must flag."""
    immersed, chekanov, clifford = gr24_chart_potentials()
    if flip_sign:
        chekanov = Potential(
            chekanov.expr - parse("2*y1"), chekanov.chart, chekanov.variables,
            chekanov.model,
        )
    charts = (
        Chart("immersed", ("u", "v", "z0", "w0"), "node times holonomy torus"),
        Chart("chekanov", ("x1", "y1", "z1", "w1")),
        Chart("clifford", ("x2", "y2", "z2", "w2")),
    )
    transitions = (
        Transition(
            "immersed",
            "chekanov",
            {"x1": parse("u*v - 1"), "y1": parse("u"), "z1": parse("z0"), "w1": parse("w0")},
            (parse("u*v - 1"),),
        ),
        Transition(
            "chekanov",
            "immersed",
            {"u": parse("y1"), "v": parse("(x1 + 1)/y1"), "z0": parse("z1"), "w0": parse("w1")},
            (parse("y1"),),
        ),
        Transition(
            "immersed",
            "clifford",
            {"x2": parse("u*v - 1"), "y2": parse("1/v"), "z2": parse("z0"), "w2": parse("w0")},
            (parse("u*v - 1"), parse("v")),
        ),
        Transition(
            "clifford",
            "immersed",
            {"u": parse("(1 + x2)*y2"), "v": parse("1/y2"), "z0": parse("z2"), "w0": parse("w2")},
            (parse("y2"),),
        ),
        Transition(
            "clifford",
            "chekanov",
            {"x1": parse("x2"), "y1": parse("y2*(1 + x2)"), "z1": parse("z2"), "w1": parse("w2")},
            (parse("x2 + 1"),),
        ),
        Transition(
            "chekanov",
            "clifford",
            {"x2": parse("x1"), "y2": parse("y1/(1 + x1)"), "z2": parse("z1"), "w2": parse("w1")},
            (parse("x1 + 1"),),
        ),
    )
    potentials = {
        "immersed": immersed,
        "chekanov": chekanov,
        "clifford": clifford,
    }
    return Atlas("gr(2,4)", charts, transitions, potentials)


def og15_atlas() -> Atlas:
    """Quadric threefold: node chart, both smoothings, and the degenerate
    toric fiber reached through the second smoothing."""
    og = og_potentials()
    charts = (
        Chart("immersed", ("u", "v", "z0"), "node times holonomy circle"),
        Chart("chekanov", ("x1", "y1", "z1")),
        Chart("clifford", ("x2", "y2", "z2")),
        Chart("toric-fiber", ("y1_1", "y1_2", "y1_3"), "monotone fiber of the degenerate toric system"),
    )
    bridge = og_bridge()
    transitions = (
        Transition(
            "immersed",
            "chekanov",
            {"x1": parse("u*v - 1"), "y1": parse("u"), "z1": parse("z0")},
            (parse("u*v - 1"),),
        ),
        Transition(
            "chekanov",
            "immersed",
            {"u": parse("y1"), "v": parse("(x1 + 1)/y1"), "z0": parse("z1")},
            (parse("y1"),),
        ),
        Transition(
            "immersed",
            "clifford",
            {"x2": parse("u*v - 1"), "y2": parse("1/v"), "z2": parse("z0")},
            (parse("u*v - 1"), parse("v")),
        ),
        Transition(
            "clifford",
            "immersed",
            {"u": parse("(1 + x2)*y2"), "v": parse("1/y2"), "z0": parse("z2")},
            (parse("y2"),),
        ),
        Transition(
            "clifford",
            "chekanov",
            {"x1": parse("x2"), "y1": parse("y2*(1 + x2)"), "z1": parse("z2")},
            (parse("x2 + 1"),),
        ),
        Transition(
            "chekanov",
            "clifford",
            {"x2": parse("x1"), "y2": parse("y1/(1 + x1)"), "z2": parse("z1")},
            (parse("x1 + 1"),),
        ),
        Transition("toric-fiber", "clifford", dict(bridge)),
        Transition(
            "clifford",
            "toric-fiber",
            {"y1_1": parse("x2"), "y1_2": parse("y2^2/z2"), "y1_3": parse("y2")},
        ),
    )
    potentials = {
        "immersed": og.immersed,
        "chekanov": og.chekanov,
        "clifford": og.clifford,
        "toric-fiber": og.toric_fiber,
    }
    return Atlas("og(1,5)", charts, transitions, potentials)


# -- product charts over a pair set ----------------------------------------


_PRODUCT_EDGES = {
    ("immersed", "chekanov"),
    ("chekanov", "immersed"),
    ("immersed", "clifford"),
    ("clifford", "immersed"),
    ("clifford", "chekanov"),
    ("chekanov", "clifford"),
    ("torus", "clifford"),
    ("clifford", "torus"),
}


def _pairs_label(pair_set) -> str:
    return ";".join(f"{i},{j}" for i, j in sorted(pair_set))


def _validate(n: int, pair_set) -> frozenset:
    pair_set = frozenset((int(i), int(j)) for i, j in pair_set)
    valid, _ = index_sets(n)
    if pair_set not in valid:
        raise ValueError(f"not a valid pair set for n={n}: {sorted(pair_set)}")
    return pair_set


def _surviving_z(n: int, pair_set) -> tuple[str, ...]:
    d1 = {i + 1 for i, _ in pair_set}
    d2 = {i for i, _ in pair_set}
    return tuple(
        [f"z1_{j}" for j in range(1, n - 1) if j not in d1]
        + [f"z2_{j}" for j in range(1, n - 1) if j not in d2]
    )


def product_charts(n: int, pair_set) -> dict:
    """The torus chart and the three chart types over one pair set."""
    pair_set = _validate(n, pair_set)
    lbl = _pairs_label(pair_set)
    zs = _surviving_z(n, pair_set)
    all_z = tuple(
        [f"z1_{j}" for j in range(1, n - 1)] + [f"z2_{j}" for j in range(1, n - 1)]
    )
    pairs = sorted(pair_set)
    return {
        "torus": Chart("torus", all_z, "monotone fiber; all holonomies invertible"),
        "immersed": Chart(
            f"immersed[{lbl}]", immersed_chart_variables(n, pair_set)
        ),
        "chekanov": Chart(
            f"chekanov[{lbl}]",
            tuple(x for i, _ in pairs for x in (f"x{i}_1", f"y{i}_1")) + zs,
        ),
        "clifford": Chart(
            f"clifford[{lbl}]",
            tuple(x for i, _ in pairs for x in (f"x{i}_2", f"y{i}_2")) + zs,
        ),
    }


def product_transition(n: int, pair_set, pair) -> Transition:
    """Wall crossing between two of the chart types over one pair set,
    acting on each selected slot at once and fixing the shared holonomies.

    ``pair`` is (source kind, target kind); the slot maps invert by
    back-substitution, so both directions are available.
    """
    pair_set = _validate(n, pair_set)
    source_kind, target_kind = pair
    if not pair_set:
        charts = {"torus": product_charts(n, frozenset())["torus"]}
        if source_kind != "torus" or target_kind != "torus":
            raise ValueError("only the torus chart exists over the empty pair set")
        return identity_transition(charts["torus"])
    if (source_kind, target_kind) not in _PRODUCT_EDGES:
        raise ValueError(f"unsupported chart pair: {pair!r}")
    charts = product_charts(n, pair_set)
    source = charts[source_kind]
    target = charts[target_kind]
    bindings: dict[str, RationalFunction] = {}
    constraints: list[RationalFunction] = []
    shared = set(_surviving_z(n, pair_set))
    for name in target.variables:
        if name in shared:
            bindings[name] = RationalFunction.var(name)
    for i, _ in sorted(pair_set):
        u, v = parse(f"u{i}"), parse(f"v{i}")
        x1, y1 = parse(f"x{i}_1"), parse(f"y{i}_1")
        x2, y2 = parse(f"x{i}_2"), parse(f"y{i}_2")
        one = RationalFunction.constant(1)
        if (source_kind, target_kind) == ("immersed", "chekanov"):
            bindings[f"x{i}_1"] = u * v - one
            bindings[f"y{i}_1"] = u
            constraints.append(u * v - one)
        elif (source_kind, target_kind) == ("chekanov", "immersed"):
            bindings[f"u{i}"] = y1
            bindings[f"v{i}"] = (x1 + one) / y1
            constraints.append(y1)
        elif (source_kind, target_kind) == ("immersed", "clifford"):
            bindings[f"x{i}_2"] = u * v - one
            bindings[f"y{i}_2"] = one / v
            constraints.append(u * v - one)
            constraints.append(v)
        elif (source_kind, target_kind) == ("clifford", "immersed"):
            bindings[f"u{i}"] = (one + x2) * y2
            bindings[f"v{i}"] = one / y2
            constraints.append(y2)
        elif (source_kind, target_kind) == ("clifford", "chekanov"):
            bindings[f"x{i}_1"] = x2
            bindings[f"y{i}_1"] = y2 * (one + x2)
            constraints.append(x2 + one)
        elif (source_kind, target_kind) == ("chekanov", "clifford"):
            bindings[f"x{i}_2"] = x1
            bindings[f"y{i}_2"] = y1 / (one + x1)
            constraints.append(x1 + one)
        elif (source_kind, target_kind) == ("torus", "clifford"):
            za, zb = parse(f"z1_{i}"), parse(f"z1_{i + 1}")
            wa, wb = parse(f"z2_{i}"), parse(f"z2_{i + 1}")
            bindings[f"x{i}_2"] = zb * wa / (za * wb)
            bindings[f"y{i}_2"] = wb / wa
        elif (source_kind, target_kind) == ("clifford", "torus"):
            bindings[f"z1_{i + 1}"] = x2 * y2 * parse(f"z1_{i}")
            bindings[f"z2_{i}"] = parse(f"z2_{i + 1}") / y2
            constraints.append(y2)
    return Transition(source.name, target.name, bindings, tuple(constraints))


def gr_product_atlas(n: int, pair_sets=None) -> Atlas:
    """The tree of charts through the shared monotone torus: for every
    listed pair set, the three chart types glued to each other and, via the
    clifford type, to the torus chart."""
    if pair_sets is None:
        _, maximal = index_sets(n)
        pair_sets = maximal
    pair_sets = sorted((_validate(n, ps) for ps in pair_sets), key=sorted)
    torus_potential = gc_torus_potential(n)
    charts = [product_charts(n, frozenset())["torus"]]
    transitions: list[Transition] = []
    potentials = {"torus": torus_potential}
    model = f"gr(2,{n})"
    for ps in pair_sets:
        named = product_charts(n, ps)
        charts += [named["immersed"], named["chekanov"], named["clifford"]]
        transitions += [
            product_transition(n, ps, pair) for pair in sorted(_PRODUCT_EDGES)
        ]
        l2_to_torus = product_transition(n, ps, ("clifford", "torus"))
        w_l2 = torus_potential.expr.substitute(l2_to_torus.bindings)
        l1_to_l0 = product_transition(n, ps, ("chekanov", "immersed"))
        w_l0 = immersed_potential(n, ps)
        w_l1 = w_l0.expr.substitute(l1_to_l0.bindings)
        potentials[named["immersed"].name] = w_l0
        potentials[named["chekanov"].name] = Potential(
            w_l1, named["chekanov"].name, named["chekanov"].variables, model
        )
        potentials[named["clifford"].name] = Potential(
            w_l2, named["clifford"].name, named["clifford"].variables, model
        )
    return Atlas(f"gr(2,{n})-tree", tuple(charts), tuple(transitions), potentials)
