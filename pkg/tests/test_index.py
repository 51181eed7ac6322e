from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from chainfix import algebra, complexes, index
from chainfix.algebra import QQ
from chainfix.index import OpenRegion, SimplicialMap, Tower

AXIOM_NAMES = ["normalization", "additivity", "existence", "homotopy", "contraction",
               "multiplicativity", "commutativity"]


def octahedron_symmetry(perm, flips):
    # vertex 2*axis + side goes to the permuted axis, side flipped when asked
    return {2 * a + s: 2 * perm[a] + (s ^ flips[a]) for a in range(3) for s in (0, 1)}


symmetries = st.tuples(st.sampled_from(list(permutations(range(3)))),
                       st.tuples(*[st.integers(0, 1)] * 3))


@given(symmetries)
@settings(max_examples=48, deadline=None)
def test_index_on_whole_sphere_is_lefschetz_number(sym):
    octa = complexes.octahedron()
    f = SimplicialMap(Tower(octa), octahedron_symmetry(*sym))
    value = index.index_of_map(f, OpenRegion.whole(octa)).value
    assert value == index.lefschetz_of_map(f)
    assert value == algebra.lefschetz_number(f.chain_map(QQ))


@pytest.mark.parametrize("name", AXIOM_NAMES)
def test_axiom(axiom_suite, name):
    suite, _ = axiom_suite
    cases = suite[name]
    assert len(cases) >= 3
    bad = [c.to_json() for c in cases if not c.ok]
    assert not bad


def test_additivity_pieces_are_disjoint_and_sum():
    ring6 = complexes.polygon(6)
    f = SimplicialMap(Tower(ring6), {i: (-i) % 6 for i in range(6)})
    near0, near3 = OpenRegion.open_star(ring6, [(0,)]), OpenRegion.open_star(ring6, [(3,)])
    assert near0.disjoint_from(near3)
    whole = index.index_of_map(f, OpenRegion.whole(ring6)).value
    parts = [index.index_of_map(f, r).value for r in (near0, near3)]
    assert whole == sum(parts) == index.lefschetz_of_map(f)


def test_fixed_point_free_map_has_index_zero_everywhere():
    ring6 = complexes.polygon(6)
    f = SimplicialMap(Tower(ring6), {i: (i + 3) % 6 for i in range(6)})
    assert index.index_of_map(f, OpenRegion.whole(ring6)).value == 0
    assert f.exact_fixed_cells(0) == []


def test_invariance_over_choices():
    path = complexes.path3()
    f = SimplicialMap(Tower(path), {0: 2, 1: 1, 2: 0})
    values = index.index_invariance(f, OpenRegion.open_star(path, [(1,)]))
    assert len(values) >= 3
    assert len(set(values.values())) == 1


def test_region_must_be_open():
    path = complexes.path3()
    with pytest.raises(ValueError):
        OpenRegion(path, [(1,)])
    assert OpenRegion.open_star(path, [(1,)]).inside == {(1,), (0, 1), (1, 2)}


def test_fixed_cells_outside_region_rejected_quickly():
    hexd = complexes.hexagon_disk()
    reflection = SimplicialMap(Tower(hexd), {**{i: (-i) % 6 for i in range(6)}, 6: 6})
    with pytest.raises(ValueError, match="frontier"):
        index.index_of_map(reflection, OpenRegion.open_star(hexd, [(6,)]))


def test_mod_p_rejects_region_losing_fixed_points():
    path = complexes.path3()
    f = SimplicialMap(Tower(path), {0: 2, 1: 1, 2: 0})
    # f squared is the identity, whose fixed set leaves the star of the middle vertex
    with pytest.raises(ValueError, match="invariant"):
        index.mod_p_check(f, OpenRegion.open_star(path, [(1,)]), 2)


@pytest.mark.parametrize("p", [2, 3])
def test_mod_p_on_octahedron_rotation(p):
    octa = complexes.octahedron()
    quarter = SimplicialMap(Tower(octa), {0: 2, 2: 1, 1: 3, 3: 0, 4: 4, 5: 5})
    rep = index.mod_p_check(quarter, OpenRegion.whole(octa), p)
    assert rep.congruent
    assert rep.index_fm == index.lefschetz_of_map(quarter.power(p))


def test_non_simplicial_and_unequal_fibres():
    tri = complexes.SimplicialComplex([(0, 1, 2)])
    with pytest.raises(ValueError, match="unequal"):
        SimplicialMap(Tower(tri), {0: 0, 1: 0, 2: 1})
    ring6 = complexes.polygon(6)
    with pytest.raises(ValueError, match="not simplicial"):
        SimplicialMap(Tower(ring6), {i: (2 * i) % 6 for i in range(6)})


def test_prism_homotopy():
    hexd = complexes.hexagon_disk()
    tower = Tower(hexd)
    ident = SimplicialMap(tower, {v: v for v in range(7)})
    const = SimplicialMap(tower, {v: 6 for v in range(7)})
    assert algebra.is_chain_homotopy(index.prism_homotopy(ident, const))
    rot = SimplicialMap(tower, {**{i: (i + 3) % 6 for i in range(6)}, 6: 6})
    with pytest.raises(ValueError):
        index.prism_homotopy(ident, rot)


def test_eilenberg_zilber():
    seg, tri = complexes.segment(), complexes.hollow_triangle()
    aw, sh, prod = index.ez_maps(seg, tri)
    assert algebra.check_chain_map(aw).ok and algebra.check_chain_map(sh).ok
    back = algebra.compose(aw, sh)
    assert all(back.of(c) == {c: 1} for q in back.source.degrees for c in back.source.basis(q))
    assert algebra.is_chain_homotopy(index.ez_homotopy(prod, aw, sh))


def test_affine_subdivision_operator_is_chain_map():
    hexd = complexes.hexagon_disk()
    op = index.AffineSubdivision(hexd)
    big = tuple(hexd.point(v) for v in (0, 1, 6))
    chain = {big: 1}
    assert op.rounds(big) > 0
    image = op.apply(chain)
    assert index.affine_d(image) == op.apply(index.affine_d(chain))
    assert all(op.is_small(s) for s in image)
    # subdivided minus identity is a boundary plus the homotopy of the boundary
    h = op.homotopy(chain)
    lhs = algebra.chain_add(image, chain, QQ, -1)
    rhs = algebra.chain_add(index.affine_d(h), op.homotopy(index.affine_d(chain)), QQ)
    assert lhs == rhs
    with pytest.raises(ValueError, match="closed simplex"):
        op.rounds(tuple(hexd.point(v) for v in (0, 2, 6)))


def test_choice_search_fails_cleanly_without_separation():
    path = complexes.path3()
    ident = SimplicialMap(Tower(path), {v: v for v in range(3)})
    with pytest.raises(ValueError):
        index.index_of_map(ident, OpenRegion.open_star(path, [(1,)]))


def test_index_values_are_integral_over_z():
    hexd = complexes.hexagon_disk()
    rot = SimplicialMap(Tower(hexd), {**{i: (i + 2) % 6 for i in range(6)}, 6: 6})
    value = index.index_of_map(rot, OpenRegion.open_star(hexd, [(6,)])).value
    assert Fraction(value).denominator == 1
    assert value == index.index_of_map(rot, OpenRegion.whole(hexd)).value
