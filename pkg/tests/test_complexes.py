from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainfix import algebra, complexes
from chainfix.algebra import QQ, ZZ
from chainfix.complexes import (CubicalGridComplex, SimplicialComplex, cube_boundary, cube_contraction,
                                cube_dim, cube_faces)

BATTERY = [complexes.point_complex, complexes.segment, complexes.path3, complexes.hollow_triangle,
           complexes.hexagon_disk, complexes.octahedron]

random_complexes = st.lists(
    st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True), min_size=1, max_size=6
).map(SimplicialComplex)

cubes = st.lists(st.integers(0, 7), min_size=1, max_size=3).map(tuple)


def test_weighted_metric():
    x, y = (Fraction(1), Fraction(0), Fraction(1, 2)), (Fraction(0), Fraction(1), Fraction(1, 2))
    assert complexes.dist(x, y) == sum(abs(a - b) / 2 ** (i + 1) for i, (a, b) in enumerate(zip(x, y)))


@given(st.lists(st.fractions(0, 1), min_size=3, max_size=3), st.lists(st.fractions(0, 1), min_size=3,
                                                                       max_size=3))
def test_metric_symmetric_and_bounded(a, b):
    assert complexes.dist(a, b) == complexes.dist(b, a) <= 1


def test_ordered_simplex_sign():
    assert complexes.ordered_simplex([2, 0, 1]) == (1, (0, 1, 2))
    assert complexes.ordered_simplex([1, 0]) == (-1, (0, 1))
    assert complexes.ordered_simplex([1, 1]) == (0, None)


def test_degenerate_simplex_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 0)])


@pytest.mark.parametrize("make", BATTERY, ids=lambda f: f.__name__)
def test_builtin_complexes_are_consistent(make):
    k = make()
    assert algebra.verify_complex(k.chain_complex(ZZ)).ok
    assert set(k.coords) == set(k.vertices)


@pytest.mark.parametrize("make", BATTERY, ids=lambda f: f.__name__)
def test_subdivision_is_chain_map_preserving_homology(make):
    k = make()
    sub = complexes.barycentric_subdivision(k)
    assert algebra.check_chain_map(sub.sd).ok
    assert algebra.homology(sub.fine.chain_complex(ZZ)).ranks == algebra.homology(k.chain_complex(ZZ)).ranks
    # every fine simplex is carried by a coarse one, and its barycenter coordinates live in that carrier
    for t, s in sub.carrier_of.items():
        assert s in k
        assert all(set(lbl[1]) <= set(s) for lbl in t)


@given(random_complexes)
@settings(max_examples=30, deadline=None)
def test_subdivision_random(k):
    sub = complexes.barycentric_subdivision(k)
    assert algebra.check_chain_map(sub.sd).ok
    assert algebra.betti_via_rank(sub.fine.chain_complex(QQ)) == algebra.betti_via_rank(k.chain_complex(QQ))


def test_iterated_subdivision_halves_edges():
    subs = complexes.iterated_subdivision(complexes.hollow_triangle(), 2)
    assert all(len(s.fine.cells(1)) == 2 * len(s.coarse.cells(1)) for s in subs)
    assert subs[1].coarse is subs[0].fine


@pytest.mark.parametrize("make", [complexes.hexagon_disk, complexes.octahedron, complexes.path3])
def test_trail_complexes_are_acyclic(make):
    k = make()
    for s in k.simplices:
        trail = complexes.trail_complex(k, s)
        assert algebra.homology(trail.chain_complex(ZZ)).reduced_is_zero(), s


def test_trail_of_missing_simplex():
    with pytest.raises(ValueError):
        complexes.trail_complex(complexes.hollow_triangle(), (0, 1, 2))


def test_cone_chain_boundary():
    # d(a * c) = c - a * dc for a cycle-free check on a single edge
    edge = {(1, 2): 1}
    cone = complexes.cone_chain(0, edge)
    lhs = complexes.chain_boundary(cone)
    rhs = algebra.chain_add(edge, complexes.cone_chain(0, complexes.chain_boundary(edge)), QQ, -1)
    assert lhs == rhs
    assert complexes.cone_chain(1, edge) == {}


def test_star_operations():
    members = [frozenset({1, 2}), frozenset({2, 3}), frozenset({4})]
    star, cover = complexes.star_operations(members, {2})
    assert star == {1, 2, 3}
    assert cover == [frozenset({1, 2, 3}), frozenset({1, 2, 3}), frozenset({4})]


@given(cubes)
def test_cube_boundary_squares_to_zero(c):
    total = {}
    for f, v in cube_boundary(c).items():
        for g, w in cube_boundary(f).items():
            total[g] = total.get(g, 0) + v * w
    assert not any(total.values())


@given(cubes)
@settings(max_examples=60, deadline=None)
def test_cube_contraction_is_homotopy(c):
    h = cube_contraction(c)
    corner = tuple(x - 1 if x & 1 else x for x in c)
    for face in cube_faces(c):
        got = _cube_d(h[face])
        for f, v in cube_boundary(face).items():
            for g, w in h[f].items():
                got[g] = got.get(g, 0) + v * w
        want = {face: 1}
        if cube_dim(face) == 0:
            want[corner] = want.get(corner, 0) - 1
        assert {x: v for x, v in got.items() if v} == {x: v for x, v in want.items() if v}


def _cube_d(chain):
    out = {}
    for c, v in chain.items():
        for f, w in cube_boundary(c).items():
            out[f] = out.get(f, 0) + v * w
    return out


def test_cube_of_point_and_bounds():
    x = (Fraction(1, 4), Fraction(3, 8))
    c = complexes.cube_of_point(x, 2, 2)
    assert c == (2, 3)
    assert complexes.cube_bounds(c, 2) == [(Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(1, 2))]
    assert complexes.cube_in_open(x, c, 2)
    # coordinates beyond the grid dimension range over [0,1]
    assert complexes.cylinder_diameter(c, 2) == Fraction(1, 4) * Fraction(1, 4) + Fraction(1, 4)


def test_grid_from_sample():
    pts = [(Fraction(1, 8), Fraction(1, 8)), (Fraction(5, 8), Fraction(1, 8))]
    g = complexes.grid_subcomplex_from_sample(pts, 2, 1)
    assert g.cells(2) == [(1, 1), (3, 1)]
    assert algebra.homology(g.chain_complex(ZZ)).reduced_is_zero()
    with pytest.raises(ValueError):
        complexes.grid_subcomplex_from_sample(pts, 2, 0)
    with pytest.raises(ValueError):
        CubicalGridComplex(2, 1, [(1,)])


@pytest.mark.parametrize("make", BATTERY, ids=lambda f: f.__name__)
def test_simplicial_json_roundtrip(make):
    k = make()
    back = SimplicialComplex.from_json(k.to_json())
    assert back.simplices == k.simplices and back.coords == k.coords


def test_grid_json_roundtrip():
    g = CubicalGridComplex(2, 2, [(1, 1), (3, 2)])
    back = CubicalGridComplex.from_json(g.to_json())
    assert back.cells_set == g.cells_set and (back.m, back.k) == (2, 2)


def test_product_with_interval_is_complex():
    base = complexes.CellComplex.from_simplicial(complexes.hexagon_disk())
    prism = complexes.product_with_interval(base)
    assert algebra.verify_complex(prism.complex.chain_complex(ZZ)).ok
    assert complexes.project_prism({(base.order[0], 1): 1}) == {base.order[0]: 1}
