"""Tests for ladder diagrams, face classification, and pair sets."""
from collections import Counter
from fractions import Fraction
from math import comb

import pytest

from lgmirror.ladder import (
    Diagram,
    admissible_diagrams,
    chart_subdivision,
    classify_face,
    diagram_from_pairs,
    full_ladder_edges,
    index_sets,
    is_admissible,
    moment_inequalities,
    monotone_point,
    positive_paths,
    tight_edge_indices,
)
from lgmirror.polytope import (
    enumerate_faces,
    enumerate_vertices,
    face_from_tight,
    satisfies,
)


def _grid_path_count(n: int) -> int:
    # independent route: count monotone lattice paths by dynamic programming
    rows, cols = 3, n - 1
    table = [[0] * cols for _ in range(rows)]
    table[0][0] = 1
    for i in range(rows):
        for j in range(cols):
            if i:
                table[i][j] += table[i - 1][j]
            if j:
                table[i][j] += table[i][j - 1]
    return table[rows - 1][cols - 1]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_positive_path_count(n):
    paths = positive_paths(n)
    assert len(paths) == _grid_path_count(n) == comb(n, 2)
    assert len(set(paths)) == len(paths)


def test_single_path_is_zero_dimensional():
    for n in (4, 5):
        for p in positive_paths(n):
            assert Diagram(n, p).dimension == 0


def test_full_ladder_dimension():
    for n in (4, 5, 6):
        assert Diagram(n, full_ladder_edges(n)).dimension == 2 * (n - 2)


@pytest.mark.parametrize("n", [4, 5])
def test_diagrams_match_polytope_faces(n):
    diagrams = admissible_diagrams(n)
    _, ineqs, _ = moment_inequalities(n)
    verts = enumerate_vertices(ineqs)
    faces = enumerate_faces(ineqs, verts)
    assert len(diagrams) == len(faces)
    assert Counter(d.dimension for d in diagrams) == Counter(f.dim for f in faces)
    seen = set()
    for d in diagrams:
        f = face_from_tight(ineqs, verts, sorted(tight_edge_indices(d)))
        assert f.dim == d.dimension
        assert f.vertex_ids not in seen
        seen.add(f.vertex_ids)


def test_diagram_inclusion_is_face_inclusion():
    n = 4
    diagrams = admissible_diagrams(n)
    _, ineqs, _ = moment_inequalities(n)
    verts = enumerate_vertices(ineqs)
    vsets = {
        d.edges: face_from_tight(ineqs, verts, sorted(tight_edge_indices(d))).vertex_ids
        for d in diagrams
    }
    for d1 in diagrams:
        for d2 in diagrams:
            if d1.edges <= d2.edges:
                assert vsets[d1.edges] <= vsets[d2.edges]


def test_every_enumerated_diagram_is_a_path_union():
    for n in (4, 5):
        for d in admissible_diagrams(n):
            assert is_admissible(n, d.edges)
    assert not is_admissible(4, frozenset())
    # a path with one edge dropped is not a union of paths
    p = positive_paths(4)[0]
    broken = frozenset(list(p)[1:])
    assert not is_admissible(4, broken)


def test_gr24_has_six_facets():
    diagrams = admissible_diagrams(4)
    facets = [d for d in diagrams if d.dimension == 3]
    assert len(facets) == 6
    for d in facets:
        assert not classify_face(d).lagrangian


def test_classification_of_gr24_faces():
    full = Diagram(4, full_ladder_edges(4))
    c = classify_face(full)
    assert (c.lagrangian, c.n1, c.n2, c.diffeo_type) == (True, 4, 0, "T^4")
    block = diagram_from_pairs(4, frozenset({(1, 2)}))
    c2 = classify_face(block)
    assert (c2.lagrangian, c2.n1, c2.n2, c2.diffeo_type) == (True, 0, 1, "S^3 x S^1")
    assert block.dimension == 1


@pytest.mark.parametrize("n,count", [(4, 2), (5, 3), (6, 5)])
def test_lagrangian_count_matches_pair_sets(n, count):
    diagrams = admissible_diagrams(n)
    lag = [d for d in diagrams if classify_face(d).lagrangian]
    assert len(lag) == count
    all_sets, _ = index_sets(n)
    assert len(all_sets) == count
    assert {d.edges for d in lag} == {diagram_from_pairs(n, s).edges for s in all_sets}


def test_lagrangian_block_balance():
    for n in (4, 5, 6):
        for d in admissible_diagrams(n):
            c = classify_face(d)
            if c.lagrangian:
                assert c.n1 + 4 * c.n2 == 2 * (n - 2)
                assert c.n1 + c.n2 == d.dimension


def test_monotone_point_values_gr24():
    full = Diagram(4, full_ladder_edges(4))
    assert monotone_point(full) == {
        (1, 1): Fraction(0),
        (1, 2): Fraction(1),
        (2, 1): Fraction(-1),
        (2, 2): Fraction(0),
    }
    block = diagram_from_pairs(4, frozenset({(1, 2)}))
    assert monotone_point(block) == {
        (1, 1): Fraction(0),
        (1, 2): Fraction(0),
        (2, 1): Fraction(0),
        (2, 2): Fraction(0),
    }


def test_monotone_point_lies_in_polytope():
    for n in (4, 5, 6):
        labels, ineqs, _ = moment_inequalities(n)
        all_sets, _ = index_sets(n)
        for s in all_sets:
            pt = monotone_point(diagram_from_pairs(n, s))
            vec = tuple(pt[lab] for lab in labels)
            assert all(satisfies(vec, q) for q in ineqs)


def test_monotone_point_rejects_non_lagrangian():
    facet = next(d for d in admissible_diagrams(4) if d.dimension == 3)
    with pytest.raises(ValueError):
        monotone_point(facet)


def test_index_sets_small():
    all4, max4 = index_sets(4)
    assert set(all4) == {frozenset(), frozenset({(1, 2)})}
    assert set(max4) == {frozenset({(1, 2)})}
    all6, max6 = index_sets(6)
    assert set(all6) == {
        frozenset(),
        frozenset({(1, 2)}),
        frozenset({(2, 3)}),
        frozenset({(3, 4)}),
        frozenset({(1, 2), (3, 4)}),
    }
    assert set(max6) == {frozenset({(1, 2), (3, 4)}), frozenset({(2, 3)})}


def test_chart_subdivision_examples():
    cells = chart_subdivision(5, frozenset({(1, 2)}))
    assert set(cells) == {(1, 2, 5), (5, 4, 3, 2)}
    fan = chart_subdivision(4, frozenset())
    assert set(fan) == {(1, 2, 4), (2, 3, 4)}
    two_quads = chart_subdivision(6, frozenset({(1, 2), (3, 4)}))
    assert set(two_quads) == {(6, 5, 4, 3), (6, 3, 2, 1)}


def test_chart_subdivision_cell_counts():
    for n in (4, 5, 6, 7):
        all_sets, _ = index_sets(n)
        for s in all_sets:
            cells = chart_subdivision(n, s)
            quads = [c for c in cells if len(c) == 4]
            tris = [c for c in cells if len(c) == 3]
            assert len(quads) == len(s)
            assert len(tris) == n - 2 - 2 * len(s)
            assert len(cells) == (n - 2) - len(s)


def test_chart_subdivision_rejects_bad_pair_set():
    with pytest.raises(ValueError):
        chart_subdivision(6, frozenset({(1, 2), (2, 3)}))
    with pytest.raises(ValueError):
        chart_subdivision(4, frozenset({(2, 3)}))


def test_moment_inequality_count_and_boundedness():
    for n in (4, 5):
        labels, ineqs, pinned = moment_inequalities(n)
        assert len(ineqs) == 3 * n - 6
        assert len(pinned) == len(ineqs)
        assert len(labels) == 2 * (n - 2)
        verts = enumerate_vertices(ineqs)
        assert verts  # nonempty and, being vertex-spanned, bounded
        top = enumerate_faces(ineqs, verts)[-1]
        assert top.dim == 2 * (n - 2)
