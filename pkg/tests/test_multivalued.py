from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainfix import complexes, multivalued
from chainfix.multivalued import ApproximationError, MultiMap


def segment_multimap(values, branches=()):
    return MultiMap.from_json({"domain": complexes.segment().to_json(), "values": values,
                               "branches": list(branches)})


@pytest.fixture(scope="module")
def antipodal():
    octa = complexes.octahedron().to_json()
    mm = MultiMap.from_json({"domain": octa, "branches": [{str(v): v for v in range(6)},
                                                          {str(v): v ^ 1 for v in range(6)}]})
    certs = {s: multivalued.approximate(mm, 0, Fraction(1, 4), s) for s in ("first", "last", "average")}
    return mm, certs


def test_jump_up_is_upper_but_not_lower_semicontinuous():
    mm = segment_multimap({"0": [[0, 1]], "0,1": [[0]], "1": [[0]]})
    assert multivalued.is_usc(mm).ok
    lower = multivalued.is_lsc(mm)
    assert not lower.ok and lower.witness["face"] == [0]
    assert not multivalued.is_vietoris_continuous(mm).ok


def test_jump_down_is_lower_but_not_upper_semicontinuous():
    mm = segment_multimap({"0": [[0]], "0,1": [[0, 1]], "1": [[0, 1]]})
    assert multivalued.is_lsc(mm).ok
    upper = multivalued.is_usc(mm)
    assert not upper.ok and upper.witness["face"] == [0]


def test_single_valued_branch_is_continuous():
    mm = segment_multimap({}, [{"0": 1, "1": 0}])
    assert multivalued.is_vietoris_continuous(mm).ok


def test_circle_value_rejected():
    mm = MultiMap.from_json({"domain": complexes.point_complex().to_json(),
                             "target": complexes.hollow_triangle().to_json(),
                             "values": {"0": [[0, 1], [1, 2], [0, 2]]}})
    with pytest.raises(ApproximationError) as err:
        multivalued.approximate(mm, 0, Fraction(1, 4))
    assert err.value.witness["betti"][1] == 1


def test_bad_values_rejected():
    with pytest.raises(ValueError, match="not a cell"):
        segment_multimap({"0": [[0, 2]]})
    with pytest.raises(ValueError, match="empty value"):
        segment_multimap({"0": [[0]]})


def test_constant_map_fixed_point_located():
    mm = segment_multimap({}, [{"0": 0, "1": 0}])
    rep = multivalued.fixed_point_certificate(mm, 2)
    assert rep.outcome == "located" and rep.cell == (0,) and rep.level == 0


def test_fixed_point_search_without_hypothesis_still_locates(antipodal):
    mm, _ = antipodal
    rep = multivalued.fixed_point_certificate(mm, 1, hypothesis_met=False)
    assert rep.outcome == "located"
    assert rep.to_json()["hypothesis_met"] is False


def test_certificates_verify(antipodal):
    _, certs = antipodal
    for cert in certs.values():
        assert multivalued.verify_approximation(cert).ok


def test_single_branch_strategies_match_branch_lefschetz(antipodal):
    _, certs = antipodal
    octa = complexes.octahedron()
    from chainfix import index
    ident = index.SimplicialMap(index.Tower(octa), {v: v for v in range(6)})
    anti = index.SimplicialMap(index.Tower(octa), {v: v ^ 1 for v in range(6)})
    assert certs["first"].lefschetz() == index.lefschetz_of_map(ident)
    assert certs["last"].lefschetz() == index.lefschetz_of_map(anti)


@given(st.fractions(0, 1))
@settings(max_examples=10, deadline=None)
def test_mixing_is_affine(antipodal, q):
    _, certs = antipodal
    a, b = certs["first"], certs["last"]
    assert a.mixed(b, q).lefschetz() == q * a.lefschetz() + (1 - q) * b.lefschetz()


def test_mixing_needs_common_scale(antipodal):
    _, certs = antipodal
    with pytest.raises(ValueError):
        certs["first"].mixed(replace(certs["last"], eps=Fraction(1, 8)), Fraction(1, 2))


def test_zero_eps_mutant_fails_verification(antipodal):
    # constructed chains sit inside their pieces, so only a vanishing eps breaks them
    _, certs = antipodal
    rep = multivalued.verify_approximation(replace(certs["average"], eps=Fraction(0)))
    assert not rep.ok and rep.witness["reason"] == "carrier inclusion"


def test_displaced_vertex_mutant_fails_verification():
    mm = segment_multimap({}, [{"0": 0, "1": 1}])
    cert = multivalued.approximate(mm, 2, Fraction(1, 16))
    assert multivalued.verify_approximation(cert).ok
    target, n = mm.target, cert.n
    chains = dict(cert.chains)
    v = min(chains, key=lambda t: (len(t), target.point(n, t[0])))
    far = max(target.vertices(n), key=lambda w: target.point(n, w))
    chains[v] = {(far,): 1}
    rep = multivalued.verify_approximation(replace(cert, chains=chains))
    assert not rep.ok and rep.witness["reason"] == "carrier inclusion"


def test_perturbed_vertex_coefficient_fails_verification(antipodal):
    _, certs = antipodal
    cert = certs["first"]
    chains = dict(cert.chains)
    v = min(t for t in chains if len(t) == 1)
    chains[v] = {c: 2 * x for c, x in chains[v].items()}
    rep = multivalued.verify_approximation(replace(cert, chains=chains))
    assert not rep.ok and rep.witness["reason"] == "augmentation"


def test_perturbed_edge_chain_fails_verification(antipodal):
    _, certs = antipodal
    cert = certs["first"]
    chains = dict(cert.chains)
    e = min(t for t in chains if len(t) == 2)
    chains[e] = {c: -x for c, x in chains[e].items()}
    rep = multivalued.verify_approximation(replace(cert, chains=chains))
    assert not rep.ok and rep.witness["reason"] == "chain map"


def test_dichotomy_reports_indeterminate_with_mixing(antipodal):
    mm, _ = antipodal
    dich = multivalued.lefschetz_of_multimap(mm, [(0, Fraction(1, 4))])
    assert not dich.determinate and dich.mixing.ok
    assert dich.to_json()["value"] == "Q"


def test_dichotomy_single_branch_is_determinate():
    mm = segment_multimap({}, [{"0": 1, "1": 0}])
    dich = multivalued.lefschetz_of_multimap(mm, [(0, Fraction(1, 4)), (1, Fraction(1, 8))])
    assert dich.determinate and dich.value == 1


def test_bad_strategy_and_eps():
    mm = segment_multimap({}, [{"0": 1, "1": 0}])
    with pytest.raises(ValueError):
        multivalued.approximate(mm, 0, 0)
    with pytest.raises(ValueError):
        multivalued.approximate(mm, 0, Fraction(1, 4), "median")


points = st.lists(st.fractions(0, 1), min_size=2, max_size=2)


@given(st.lists(points, min_size=1, max_size=3), st.lists(points, min_size=1, max_size=3))
def test_box_gap_is_lower_bound(a, b):
    gap = multivalued.box_gap(a, b)
    assert gap >= 0
    assert all(gap <= complexes.dist(x, y) for x in a for y in b)
