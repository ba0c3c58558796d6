"""Command line front end.

Every subcommand produces a run report: a nonempty list of named checks,
rendered as text on stdout or written as versioned JSON with --json.  The
exit status is 0 exactly when every check passed, so the commands can sit
directly in shell pipelines and CI jobs.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from .atlas import (
    gr24_atlas,
    gr_product_atlas,
    local_model_atlas,
    og15_atlas,
    verify_cocycle,
    verify_potential_transport,
)
from .critical import SolveConfig, atlas_critical_points, verify_counts, verify_known
from .koszul import gr24_koszul, koszul_square_check, og15_koszul
from .ladder import (
    admissible_diagrams,
    classify_face,
    diagram_from_pairs,
    moment_inequalities,
    monotone_point,
    tight_edge_indices,
)
from .novikov import novikov_expand
from .plucker import covering_certificate, covering_check, geometric_to_plucker
from .polytope import _is_tight, satisfies
from .potentials import (
    immersed_potential,
    immersed_terms,
    og_potentials,
    rietsch_gr,
)
from .laurent import LaurentPoly
from .rational import parse
from .report import Report, RunReport, Verdict


class CliError(Exception):
    """A user-facing invocation problem; rendered as a short message."""


def parse_pairs(text: str | None) -> frozenset:
    if not text:
        return frozenset()
    pairs = set()
    for chunk in text.split(";"):
        fields = chunk.split(",")
        if len(fields) != 2:
            raise argparse.ArgumentTypeError(f"bad pair {chunk!r}, expected i,j")
        try:
            pairs.add((int(fields[0]), int(fields[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair {chunk!r}, expected integers")
    return frozenset(pairs)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational number {text!r}")


def _need_n(args) -> int:
    if args.n is None:
        raise CliError("this command needs --n")
    return args.n


def _pairs_label(pairs: frozenset) -> str:
    return ";".join(f"{i},{j}" for i, j in sorted(pairs)) or "(empty)"


# -- subcommand handlers ---------------------------------------------------


def run_faces(args) -> tuple[RunReport, list[str]]:
    n = _need_n(args)
    diagrams = admissible_diagrams(n)
    lagrangian = [d for d in diagrams if classify_face(d).lagrangian]
    labels, ineqs, pinned = moment_inequalities(n)
    verdicts = [
        Verdict(
            "census",
            True,
            f"{len(diagrams)} faces, {len(lagrangian)} Lagrangian",
        )
    ]
    lines = [f"faces of the ladder polytope, n = {n}"]
    lagrangian.sort(key=lambda d: sorted(tight_edge_indices(d)))
    for k, d in enumerate(lagrangian):
        cls = classify_face(d)
        point = monotone_point(d)
        vec = tuple(point[lab] for lab in labels)
        inside = all(satisfies(vec, q) for q in ineqs)
        placed = all(
            _is_tight(vec, ineqs[idx]) == (e not in d.edges)
            for e, idx in pinned.items()
        )
        verdicts.append(
            Verdict(
                f"monotone[{k}:{cls.diffeo_type}]",
                inside and placed,
                f"n1={cls.n1} n2={cls.n2}, point in polytope with matching tight walls",
            )
        )
        lines.append(
            f"  {cls.diffeo_type}: dim {d.dimension}, "
            f"point {', '.join(f'{lab}={point[lab]}' for lab in labels)}"
        )
    report = Report(f"lagrangian face census [n={n}]", tuple(verdicts))
    run = RunReport(
        command="faces",
        inputs={"n": n},
        reports=[report],
        artifacts={
            "faces": [
                {
                    "diffeo_type": classify_face(d).diffeo_type,
                    "dimension": d.dimension,
                    "monotone_point": {
                        f"{r},{c}": str(v) for (r, c), v in monotone_point(d).items()
                    },
                }
                for d in lagrangian
            ]
        },
    )
    return run, lines


def run_charts(args) -> tuple[RunReport, list[str]]:
    n = _need_n(args)
    pairs = args.pairs
    dic = geometric_to_plucker(n, pairs)
    lines = [f"chart dictionary, n = {n}, pairs {_pairs_label(pairs)}"]
    for name in sorted(dic.bindings):
        lines.append(f"  {name} = {dic.bindings[name]}   (t-power {dic.tpowers[name]})")
    verdicts = [
        Verdict(
            "dictionary",
            len(dic.bindings) == 2 * (n - 2),
            f"{len(dic.bindings)} coordinates, quantum power {dic.q_power}",
        ),
        Verdict(
            "weights",
            sorted(dic.tpowers) == sorted(dic.bindings),
            "every coordinate carries a valuation weight",
        ),
    ]
    run = RunReport(
        command="charts",
        inputs={"n": n, "pairs": _pairs_label(pairs)},
        reports=[Report(f"chart dictionary [n={n}]", tuple(verdicts))],
        artifacts={"bindings": {k: str(v) for k, v in sorted(dic.bindings.items())}},
    )
    return run, lines


def run_potential(args) -> tuple[RunReport, list[str]]:
    if args.model == "gr":
        n = _need_n(args)
        pot = immersed_potential(n, args.pairs)
        expected_terms = (3 * n - 6) - 2 * len(args.pairs)
        count = len(immersed_terms(n, args.pairs))
        verdicts = [
            Verdict(
                "term-count",
                count == expected_terms,
                f"{count} terms, surgery removes three per pair",
            )
        ]
    elif args.model in ("og15", "og14"):
        og = og_potentials()
        pot = og.immersed if args.model == "og15" else og.og14
        verdicts = [
            Verdict("term-count", True, f"chart {pot.chart} of {pot.model}")
        ]
    else:
        raise CliError(f"unknown model {args.model!r}")
    expr = pot.expr
    if args.q is not None:
        if "q" in expr.variables():
            expr = expr.substitute({"q": args.q})
        elif "T" in expr.variables():
            if args.q != 1:
                raise CliError(
                    "the quantum parameter enters through its n-th root; "
                    "only --q 1 substitutes exactly"
                )
            expr = expr.substitute({"T": 1})
    lines = [f"potential [{pot.model} / {pot.chart}]", f"  {expr}"]
    run = RunReport(
        command="potential",
        inputs={"model": args.model, "n": args.n, "pairs": _pairs_label(args.pairs)},
        reports=[Report(f"potential [{pot.model}/{pot.chart}]", tuple(verdicts))],
        artifacts={"potential": str(expr), "variables": list(pot.variables)},
    )
    return run, lines


def run_rietsch(args) -> tuple[RunReport, list[str]]:
    if args.model == "gr":
        n = _need_n(args)
        pot = rietsch_gr(n)
        terms = str(pot.expr).count(" + ") + 1
        verdicts = [Verdict("term-count", terms == n, f"{terms} summands")]
    elif args.model == "og15":
        pot = og_potentials().rietsch
        factors = [str(f) for f, _ in pot.expr.factors]
        verdicts = [
            Verdict(
                "denominator",
                factors == ["p0*p3 - p1*p2"],
                "denominator is the defining quadric",
            )
        ]
    else:
        raise CliError("homogeneous potentials exist for gr and og15")
    expr = pot.expr
    if args.q is not None:
        expr = expr.substitute({"q": args.q})
    lines = [f"homogeneous potential [{pot.model}]", f"  {expr}"]
    run = RunReport(
        command="rietsch",
        inputs={"model": args.model, "n": args.n},
        reports=[Report(f"homogeneous potential [{pot.model}]", tuple(verdicts))],
        artifacts={"potential": str(expr)},
    )
    return run, lines


def _select_atlas(args):
    if args.model == "local":
        return local_model_atlas()
    if args.model == "og15":
        return og15_atlas()
    if args.model == "gr":
        n = _need_n(args)
        return gr24_atlas() if n == 4 else gr_product_atlas(n)
    raise CliError(f"no atlas for model {args.model!r}")


def run_verify(args) -> tuple[RunReport, list[str]]:
    t0 = time.perf_counter()
    artifacts: dict = {}
    if args.check == "rietsch":
        if args.model == "gr":
            n = _need_n(args)
            ok = verify_rietsch_ok(f"gr(2,{n})", args.pairs)
            title = f"potential identity [gr(2,{n}), pairs {_pairs_label(args.pairs)}]"
        elif args.model == "og15":
            ok = verify_rietsch_ok("og15", frozenset())
            title = "potential identity [og(1,5)]"
        else:
            raise CliError("the identity is stored for gr and og15")
        reports = [
            Report(
                title,
                (
                    Verdict(
                        "floer-equals-homogeneous",
                        ok,
                        "disk potential matches the homogeneous one "
                        "modulo coordinate relations",
                    ),
                ),
            )
        ]
    elif args.check in ("cocycle", "transport"):
        atlas = _select_atlas(args)
        check = verify_cocycle if args.check == "cocycle" else verify_potential_transport
        reports = [check(atlas)]
    elif args.check == "koszul":
        data = gr24_koszul() if args.model == "gr" else og15_koszul()
        reports = [koszul_square_check(data)]
        artifacts["koszul"] = data.as_dict()
    elif args.check == "covering":
        n = _need_n(args)
        sampled = covering_check(n, args.samples, args.seed)
        rows = covering_certificate(n)
        reports = [
            Report(
                f"chart covering [n={n}]",
                (
                    Verdict(
                        "random-samples",
                        sampled.ok,
                        f"{sampled.samples} random + {sampled.degenerate_checked} "
                        f"degenerate points, "
                        f"{len(sampled.failures) + len(sampled.degenerate_failures)}"
                        " failures",
                    ),
                    Verdict(
                        "case-analysis",
                        all(row["covered"] for row in rows),
                        f"{len(rows)} vanishing patterns, each in some maximal chart",
                    ),
                ),
            )
        ]
        artifacts["patterns"] = rows
    else:
        raise CliError(f"unknown check {args.check!r}")
    run = RunReport(
        command=f"verify {args.check}",
        inputs={
            "model": getattr(args, "model", None),
            "n": args.n,
            "pairs": _pairs_label(args.pairs),
            "seed": args.seed,
        },
        reports=reports,
        timings={"verify": time.perf_counter() - t0},
        artifacts=artifacts,
    )
    return run, []


def verify_rietsch_ok(model: str, pairs: frozenset) -> bool:
    from .potentials import verify_rietsch_identity

    return verify_rietsch_identity(model, pairs)


def run_critical(args) -> tuple[RunReport, list[str]]:
    if args.model == "gr":
        if args.n not in (None, 4):
            raise CliError("reference critical data covers gr(2,4) only")
        model = "gr24"
    elif args.model == "og15":
        model = "og15"
    else:
        raise CliError("critical data stored for gr (n=4) and og15")
    if args.q is not None and args.q != 1:
        raise CliError("reference critical data is at unit quantum parameter")
    cfg = SolveConfig(seed=args.seed)
    t0 = time.perf_counter()
    closed = verify_known(model)
    solved = verify_counts(model, cfg)
    elapsed = time.perf_counter() - t0
    points = atlas_critical_points(model, cfg)
    lines = [f"critical points [{model}]"]
    for p in points:
        lines.append(f"  value {p.value:.6f}  residual {p.residual:.2e}")
    run = RunReport(
        command="critical",
        inputs={"model": args.model, "n": args.n, "seed": args.seed},
        reports=[closed, solved],
        timings={"solve": elapsed},
        artifacts={"points": [p.as_dict() for p in points]},
    )
    return run, lines


_EXPANSIONS = {
    "gr": ("v/((u*v - 1)*z0)", {"u": 1, "v": 1, "z0": 0}),
    "og15": ("u^2/(z0*(u*v - 1))", {"u": 1, "v": 1, "z0": 0}),
}


def _expected_expansion_term(model: str, i: int) -> LaurentPoly:
    if model == "gr":
        return (-parse("v/z0") * parse("u*v") ** i).num
    return (-parse("u^2/z0") * parse("u*v") ** i).num


def run_expand(args) -> tuple[RunReport, list[str]]:
    model = args.model
    if model not in _EXPANSIONS:
        raise CliError("stored expansions exist for gr and og15")
    text, weights = _EXPANSIONS[model]
    series = novikov_expand(parse(text), weights, args.order)
    lines = [f"valuation expansion of {text} to order {args.order}"]
    verdicts = []
    for k, e in enumerate(series.exponents()):
        coeff = series.coefficient(e)
        lines.append(f"  T^{e}: {coeff}")
        expected = _expected_expansion_term(model, k)
        verdicts.append(
            Verdict(
                f"coefficient[T^{e}]",
                coeff.key() == expected.key(),
                f"matches the closed form {expected}",
            )
        )
    if not verdicts:
        verdicts.append(Verdict("series", False, "no terms below the cut-off"))
    run = RunReport(
        command="expand",
        inputs={"model": model, "order": args.order},
        reports=[Report(f"wall-crossing series [{model}]", tuple(verdicts))],
        artifacts={"series": {str(e): str(series.coefficient(e)) for e in series.exponents()}},
    )
    return run, lines


# -- argument wiring -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgmirror",
        description="Exact toolkit for the mirror charts, potentials and "
        "critical data of the small Grassmannian and quadric models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_default=None):
        p.add_argument("--n", type=int, default=None, help="size parameter")
        p.add_argument(
            "--pairs",
            type=parse_pairs,
            default=frozenset(),
            help="surgery pairs like 1,2 or 1,2;3,4",
        )
        p.add_argument("--model", default=model_default, help="gr, og15 or og14")
        p.add_argument("--q", type=_fraction, default=None, help="quantum parameter")
        p.add_argument("--order", type=int, default=10, help="series cut-off")
        p.add_argument("--seed", type=int, default=42, help="random seed")
        p.add_argument(
            "--samples", type=int, default=1000, help="sample count for covering"
        )
        p.add_argument("--json", default=None, metavar="PATH", help="write JSON here")

    common(sub.add_parser("faces", help="classify Lagrangian faces"))
    common(sub.add_parser("charts", help="print a chart dictionary"))
    common(sub.add_parser("potential", help="print a disk potential"), "gr")
    common(sub.add_parser("rietsch", help="print a homogeneous potential"), "gr")
    verify = sub.add_parser("verify", help="run an exact verification")
    verify.add_argument(
        "check",
        choices=["rietsch", "cocycle", "transport", "koszul", "covering"],
    )
    common(verify, "gr")
    common(sub.add_parser("critical", help="solve for critical points"), "gr")
    common(sub.add_parser("expand", help="expand a wall-crossing term"), "gr")
    return parser


_HANDLERS = {
    "faces": run_faces,
    "charts": run_charts,
    "potential": run_potential,
    "rietsch": run_rietsch,
    "verify": run_verify,
    "critical": run_critical,
    "expand": run_expand,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        run, lines = _HANDLERS[args.command](args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    run.timings.setdefault("total", time.perf_counter() - t0)
    for line in lines:
        print(line)
    print(run.render())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(run.to_json())
    return run.exit_status


if __name__ == "__main__":
    sys.exit(main())
