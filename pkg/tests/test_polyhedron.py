import itertools
import random
from fractions import Fraction

import pytest

from paramfeas.dsl import load
from paramfeas.exact import MultiPoly
from paramfeas.polyhedron import (HPolyhedron, UnboundedError, brute_force_goal, check_bounded,
                                  covering_check, enumerate_edges, enumerate_vertices, instantiate,
                                  integer_points, rank)

from helpers import grid, random_halfplanes, random_polytope

SQUARE3 = HPolyhedron.from_rows([((1, 0), 0), ((-1, 0), -3), ((0, 1), 0), ((0, -1), -3)])
TRIANGLE = HPolyhedron.from_rows([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])
X_LE = lambda c: HPolyhedron.from_rows([((-1, 0), -c)])
X_GE = lambda c: HPolyhedron.from_rows([((1, 0), c)])


def coords(vs):
    return {v.coords for v in vs}


def test_instantiate_examples():
    p = load("param r >= 3; var d, g; system { (r+1)*d - r*g - r*(r+1) >= 0; }")
    P = instantiate(p.base_polys, {"r": 3}, ("d", "g"))
    assert P.rows == (((4, -3), 12),)
    q = load("param r >= 0; param k >= 1; var d; system { B - k*d >= 0; }")
    Q = instantiate(q.base_polys, {"r": 17, "k": 4}, ("d",))
    assert Q.rows == (((-4,), -5985),)
    z = instantiate([MultiPoly.var("r") - 5], {"r": 3}, ())
    assert z.dim == 0 and not z.constant_feasible and z.is_empty()


def test_boundedness():
    assert check_bounded(SQUARE3)
    assert not check_bounded(HPolyhedron.from_rows([((1,), 0)]))
    assert check_bounded(TRIANGLE)


def test_vertices_and_edges():
    assert coords(enumerate_vertices(SQUARE3)) == {(0, 0), (3, 0), (0, 3), (3, 3)}
    assert coords(enumerate_vertices(TRIANGLE)) == {(0, 0), (1, 0), (0, 1)}
    assert len(enumerate_edges(SQUARE3)) == 4
    assert len(enumerate_edges(TRIANGLE)) == 3
    point = HPolyhedron.from_rows([((1, 0), 1), ((-1, 0), -1), ((0, 1), 2), ((0, -1), -2)])
    assert coords(enumerate_vertices(point)) == {(1, 2)}
    assert enumerate_edges(point) == []
    with pytest.raises(UnboundedError):
        enumerate_vertices(HPolyhedron.from_rows([((1, 0), 0), ((0, 1), 0)]))


def test_mrc_vertex():
    p = load("param r >= 3; param k >= 1; var d, g; system {"
             " (r+1)*d - r*g - r*(r+1) = 0; k*d + 1 - g = B; }")
    P = instantiate(p.base_polys, {"r": 17, "k": 4}, ("d", "g"))
    (v,) = enumerate_vertices(P)
    assert v.coords == (Fraction(50711, 25), Fraction(53244, 25))
    assert not v.is_integral


def test_covering_examples():
    assert covering_check(SQUARE3, X_LE(2), X_GE(1)).covered
    res = covering_check(SQUARE3, X_LE(1), X_GE(2))
    assert not res.covered
    assert 1 < res.witness[0] < 2
    assert not X_LE(1).contains(res.witness) and not X_GE(2).contains(res.witness)
    point = HPolyhedron.from_rows([((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), 0)])
    assert covering_check(point, X_LE(1), X_GE(5)).covered
    empty = HPolyhedron.from_rows([((1, 0), 1), ((-1, 0), 0)])
    assert covering_check(empty, X_LE(0), X_GE(5)).vacuous


def test_integer_points_examples():
    assert set(integer_points(TRIANGLE)) == {(0, 0), (1, 0), (0, 1)}
    square2 = HPolyhedron.from_rows([((1, 0), 0), ((-1, 0), -2), ((0, 1), 0), ((0, -1), -2)])
    assert len(list(integer_points(square2))) == 9
    gap = HPolyhedron.from_rows([((-3,), -7), ((5,), 11)])
    assert list(integer_points(gap)) == []


def test_brute_force_goal_examples():
    empty = HPolyhedron.from_rows([((1,), 1), ((-1,), 0)])
    assert brute_force_goal(empty, []).satisfied
    base = HPolyhedron.from_rows([((1,), 0), ((-1,), -1)])
    block = HPolyhedron.from_rows([((1, -1), 0), ((-1, 1), 0)])  # y = x
    res = brute_force_goal(base, [block])
    assert res.satisfied
    assert [(x, y) for x, _, y in res.witnesses] == [((0,), (0,)), ((1,), (1,))]
    never = HPolyhedron.from_rows([((0, 1), 1), ((0, -1), 0)])
    assert brute_force_goal(base, [never]).counterexample == (0,)


# -- properties ---------------------------------------------------------------

def test_vertex_enumeration_consistency():
    rng = random.Random(8)
    for _ in range(120):
        dim = rng.randint(1, 3)
        P = random_polytope(rng, dim)
        vs = enumerate_vertices(P)
        assert vs, "nonempty bounded polytope has a vertex"
        assert len(coords(vs)) == len(vs)
        for v in vs:
            assert P.contains(v.coords)
            tight = [P.rows[i][0] for i in P.tight(v.coords)]
            assert rank(tight) == dim
        # every row attains its minimum over P at a vertex
        for normal, offset in P.rows:
            values = [sum(a * x for a, x in zip(normal, v.coords)) for v in vs]
            assert min(values) >= offset


def test_covering_agrees_with_grid():
    rng = random.Random(21)
    for _ in range(60):
        P = random_polytope(rng)
        C1, C2 = random_halfplanes(rng), random_halfplanes(rng)
        res = covering_check(P, C1, C2)
        if res.covered:
            assert all(C1.contains(x) or C2.contains(x) for x in grid(P))
        else:
            assert P.contains(res.witness)
            assert not C1.contains(res.witness) and not C2.contains(res.witness)
        assert covering_check(P, C2, C1).covered == res.covered


def test_integer_points_match_loops():
    rng = random.Random(4)
    for _ in range(100):
        dim = rng.randint(1, 3)
        P = random_polytope(rng, dim)
        expected = [x for x in itertools.product(range(-6, 7), repeat=dim) if P.contains(x)]
        assert list(integer_points(P)) == expected
