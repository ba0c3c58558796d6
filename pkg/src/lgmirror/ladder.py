"""Ladder diagrams on a 3 x (n-1) grid and the faces they cut out.

Vertices of the grid are (i, j) with 0 <= i <= 2 and 0 <= j <= n-2, drawn
with i horizontal.  A positive path walks from (0,0) to (2, n-2) by unit
steps; a diagram is a union of such paths.  Unit boxes of the grid are
(a, b) with a in {0,1} and b in 0..n-3.  Most functions take the ambient
size n alongside the edge set.

The same grid indexes the defining inequalities of a moment polytope:
each inequality is pinned to one grid edge, and the face attached to a
diagram is cut out by the inequalities of the pinned edges the diagram is
missing.  ``moment_inequalities`` builds that correspondence explicitly
so the polytope route stays independent of the diagram route.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polytope import Inequality

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]
Box = tuple[int, int]

__all__ = [
    "Diagram",
    "FaceClass",
    "admissible_diagrams",
    "bounded_regions",
    "chart_subdivision",
    "classify_face",
    "diagram_from_pairs",
    "full_ladder_edges",
    "index_sets",
    "is_admissible",
    "moment_inequalities",
    "monotone_point",
    "positive_paths",
    "tight_edge_indices",
]

_OUT = "out"


def _edge(a: Vertex, b: Vertex) -> Edge:
    return (a, b) if a <= b else (b, a)


def full_ladder_edges(n: int) -> frozenset[Edge]:
    if n < 4:
        raise ValueError("need n >= 4")
    edges = set()
    for j in range(n - 1):
        for i in range(2):
            edges.add(_edge((i, j), (i + 1, j)))
    for j in range(n - 2):
        for i in range(3):
            edges.add(_edge((i, j), (i, j + 1)))
    return frozenset(edges)


@lru_cache(maxsize=None)
def positive_paths(n: int) -> tuple[frozenset[Edge], ...]:
    """All minimal lattice paths (0,0) -> (2, n-2), as edge sets."""
    if n < 4:
        raise ValueError("need n >= 4")
    out: list[frozenset[Edge]] = []

    def walk(pos: Vertex, acc: tuple[Edge, ...]):
        i, j = pos
        if (i, j) == (2, n - 2):
            out.append(frozenset(acc))
            return
        if i < 2:
            walk((i + 1, j), acc + (_edge(pos, (i + 1, j)),))
        if j < n - 2:
            walk((i, j + 1), acc + (_edge(pos, (i, j + 1)),))

    walk((0, 0), ())
    return tuple(out)


def is_admissible(n: int, edges: frozenset[Edge]) -> bool:
    """True when the edge set is precisely a union of positive paths."""
    inside = [p for p in positive_paths(n) if p <= edges]
    return bool(inside) and frozenset().union(*inside) == edges


@dataclass(frozen=True)
class Diagram:
    n: int
    edges: frozenset[Edge]

    @property
    def regions(self) -> tuple[frozenset[Box], ...]:
        cached = self.__dict__.get("_regions")
        if cached is None:
            cached = bounded_regions(self.n, self.edges)
            self.__dict__["_regions"] = cached
        return cached

    @property
    def dimension(self) -> int:
        return len(self.regions)

    def edge_list(self) -> list[list[list[int]]]:
        return [[list(a), list(b)] for a, b in sorted(self.edges)]


def _edge_sides(n: int, e: Edge):
    (i1, j1), (i2, j2) = e
    if j1 == j2:  # step in i, horizontal segment at height j1
        i, j = min(i1, i2), j1
        below: Box | str = (i, j - 1) if j >= 1 else _OUT
        above: Box | str = (i, j) if j <= n - 3 else _OUT
        return below, above
    i, j = i1, min(j1, j2)  # step in j, vertical segment at x = i1
    left: Box | str = (i - 1, j) if i >= 1 else _OUT
    right: Box | str = (i, j) if i <= 1 else _OUT
    return left, right


def bounded_regions(n: int, edges: frozenset[Edge]) -> tuple[frozenset[Box], ...]:
    """Connected groups of unit boxes enclosed by the diagram.

    Boxes merge across every grid edge the diagram does not use; groups
    touching the outside are dropped.
    """
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    boxes = [(a, b) for a in range(2) for b in range(n - 2)]
    for box in boxes:
        find(box)
    find(_OUT)
    for e in full_ladder_edges(n):
        if e not in edges:
            s1, s2 = _edge_sides(n, e)
            union(s1, s2)
    groups: dict = {}
    for box in boxes:
        groups.setdefault(find(box), set()).add(box)
    out_root = find(_OUT)
    regions = [frozenset(g) for root, g in groups.items() if root != out_root]
    return tuple(sorted(regions, key=sorted))


def admissible_diagrams(n: int) -> tuple[Diagram, ...]:
    """Every distinct union of positive paths, dimension-sorted.

    Closure by repeatedly adjoining single paths; feasible for n up to 6
    or so, where the count stays in the thousands.
    """
    paths = positive_paths(n)
    seen: set[frozenset[Edge]] = set(paths)
    frontier = list(paths)
    while frontier:
        nxt = []
        for d in frontier:
            for p in paths:
                u = d | p
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    diagrams = [Diagram(n, e) for e in seen]
    diagrams.sort(key=lambda d: (d.dimension, sorted(d.edges)))
    return tuple(diagrams)


# -- classification -------------------------------------------------------


@dataclass(frozen=True)
class FaceClass:
    lagrangian: bool
    n1: int
    n2: int
    diffeo_type: str


def _is_double_block(piece: frozenset[Box]) -> bool:
    if len(piece) != 4:
        return False
    rows = {b for _, b in piece}
    if len(rows) != 2 or max(rows) - min(rows) != 1:
        return False
    return piece == {(a, b) for a in range(2) for b in rows}


def _fiber_name(n1: int, n2: int) -> str:
    parts = []
    if n2 == 1:
        parts.append("S^3")
    elif n2 > 1:
        parts.append(f"(S^3)^{n2}")
    tor = n1 + n2
    if tor == 1:
        parts.append("S^1")
    elif tor > 1:
        parts.append(f"T^{tor}")
    return " x ".join(parts) if parts else "point"


def classify_face(d: Diagram) -> FaceClass:
    pieces = d.regions
    n1 = sum(1 for p in pieces if len(p) == 1)
    n2 = sum(1 for p in pieces if _is_double_block(p))
    total_boxes = 2 * (d.n - 2)
    lag = (n1 + n2 == len(pieces)) and (n1 + 4 * n2 == total_boxes)
    return FaceClass(lag, n1, n2, _fiber_name(n1, n2))


def monotone_point(d: Diagram) -> dict[tuple[int, int], Fraction]:
    """The distinguished interior point of a Lagrangian face.

    Keyed by the coordinate labels (1..2, 1..n-2); single boxes get the
    staircase value, each 2x2 group sits at its lower level.
    """
    cls = classify_face(d)
    if not cls.lagrangian:
        raise ValueError("diagram does not carry a Lagrangian fiber")
    point: dict[tuple[int, int], Fraction] = {}
    for piece in d.regions:
        if len(piece) == 1:
            ((a, b),) = piece
            point[(a + 1, b + 1)] = Fraction(b - a)
        else:
            low = min(b for _, b in piece)
            for a, b in piece:
                point[(a + 1, b + 1)] = Fraction(low)
    return point


# -- pair sets and their diagrams ----------------------------------------


def index_sets(n: int) -> tuple[tuple[frozenset, ...], tuple[frozenset, ...]]:
    """Sets of disjoint consecutive pairs from {1..n-2}, plus the maximal ones."""
    pairs = [(i, i + 1) for i in range(1, n - 2)]
    all_sets = []
    for k in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, k):
            ints = [x for p in combo for x in p]
            if len(ints) == len(set(ints)):
                all_sets.append(frozenset(combo))
    maximal = [
        s for s in all_sets if not any(s < t for t in all_sets)
    ]
    return tuple(all_sets), tuple(maximal)


def _check_pair_set(n: int, pair_set: frozenset) -> None:
    valid, _ = index_sets(n)
    if frozenset(pair_set) not in valid:
        raise ValueError(f"not a valid pair set for n={n}: {sorted(pair_set)}")


def diagram_from_pairs(n: int, pair_set: frozenset) -> Diagram:
    """Full ladder minus the four edges through the middle vertex of each pair."""
    _check_pair_set(n, pair_set)
    edges = set(full_ladder_edges(n))
    for i, _ in sorted(pair_set):
        mid = (1, i)
        edges -= {
            _edge((0, i), mid),
            _edge(mid, (2, i)),
            _edge((1, i - 1), mid),
            _edge(mid, (1, i + 1)),
        }
    return Diagram(n, frozenset(edges))


def chart_subdivision(n: int, pair_set: frozenset) -> tuple[tuple[int, ...], ...]:
    """Cells of the n-gon subdivision attached to a pair set.

    Starts from the fan off vertex n; each pair (i, i+1) erases one fan
    edge and fuses two triangles into the quadrilateral
    (n, n-i, n-i-1, n-i-2).
    """
    _check_pair_set(n, pair_set)
    cells: dict[int, tuple[int, ...]] = {k: (k, k + 1, n) for k in range(1, n - 1)}
    for i, _ in sorted(pair_set):
        lo = n - i - 2
        del cells[lo]
        del cells[lo + 1]
        cells[lo] = (n, n - i, n - i - 1, n - i - 2)
    return tuple(cells[k] for k in sorted(cells))


# -- the pinned inequalities ---------------------------------------------


def moment_inequalities(n: int):
    """Inequalities of the ambient polytope, each pinned to a grid edge.

    Returns (labels, ineqs, pinned) where labels[k] names coordinate k as
    a (row, column) pair, ineqs[k] is exact affine data, and pinned maps a
    grid edge to the index of its inequality.  Coordinates are ordered
    row 1 then row 2, columns 1..n-2.  The two boundary values are fixed
    constants: top neighbour n-2, bottom neighbour -2.
    """
    labels = [(1, j) for j in range(1, n - 1)] + [(2, j) for j in range(1, n - 1)]
    pos = {lab: k for k, lab in enumerate(labels)}
    dim = len(labels)

    def form(terms: dict[tuple[int, int], int], const: int = 0) -> Inequality:
        coeffs = [Fraction(0)] * dim
        for lab, c in terms.items():
            coeffs[pos[lab]] += c
        return tuple(coeffs), Fraction(const)

    ineqs: list[Inequality] = []
    pinned: dict[Edge, int] = {}

    def add(ineq: Inequality, edge: Edge):
        pinned[edge] = len(ineqs)
        ineqs.append(ineq)

    for j in range(1, n - 1):  # row-1 increments, pinned to top rung at column j
        if j < n - 2:
            q = form({(1, j + 1): 1, (1, j): -1})
        else:
            q = form({(1, j): -1}, n - 2)
        add(q, _edge((0, j), (1, j)))
    for j in range(1, n - 2):  # row-2 increments, pinned to bottom rung
        add(form({(2, j + 1): 1, (2, j): -1}), _edge((1, j), (2, j)))
    for j in range(1, n - 1):  # interlacing, pinned to middle rail segments
        add(form({(1, j): 1, (2, j): -1}), _edge((1, j - 1), (1, j)))
    add(form({(2, 1): 1}, 2), _edge((2, 0), (2, 1)))  # floor, pinned to first bottom rail segment
    return labels, ineqs, pinned


def tight_edge_indices(d: Diagram) -> frozenset[int]:
    """Indices of pinned inequalities whose edges the diagram is missing."""
    _, _, pinned = moment_inequalities(d.n)
    return frozenset(idx for e, idx in pinned.items() if e not in d.edges)
