from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainfix import complexes, realization
from chainfix.realization import ConvexBody, RealizationError, RealizationParams

SPLIT_GENERATORS = [["3/16", "1/16", "1/16"], ["3/16", "13/16", "13/16"], ["5/32", "1/16", "3/32"]]


def split_fibre_bundle():
    # coarse parameters on purpose: the fibre over each base cell has two components
    body = ConvexBody.from_json({"generators": SPLIT_GENERATORS})
    params = RealizationParams(Fraction(1), Fraction(1, 16), Fraction(1, 128), 1, 3, 3)
    return realization.build_realization(body, 1, params)


@given(st.fractions(Fraction(1, 4096), 1))
@settings(max_examples=50, deadline=None)
def test_parameters_are_least_integers(eps):
    p = realization.choose_parameters(None, eps)
    assert p.eps1 == eps / 16 and p.delta == p.eps1 / 8
    assert Fraction(1, 2 ** p.n) < p.eps1 / 8
    assert p.n == 1 or not Fraction(1, 2 ** (p.n - 1)) < p.eps1 / 8
    assert Fraction(2 ** (p.n + 1), 2 ** p.k) < p.delta
    assert p.k == p.n + 1 or not Fraction(2 ** (p.n + 1), 2 ** (p.k - 1)) < p.delta
    assert all(c.holds for c in realization.parameter_certificates(p))


def test_quarter_scale_parameters():
    p = realization.choose_parameters(realization.triangle_body(), "1/4")
    assert (p.n, p.k, p.depth) == (10, 21, 21)


@pytest.mark.parametrize("eps", ["0", "-1/2", "3/2"])
def test_eps_outside_unit_interval_rejected(eps):
    with pytest.raises(RealizationError):
        realization.choose_parameters(None, eps)


def test_single_point_body():
    body = ConvexBody.from_json({"generators": [["1/3", "1/5"]]})
    b = realization.build_realization(body, "1/2")
    # a non-dyadic point lies in an open square; the poset is the closed square
    (top,) = [j for j in b.poset.elements if j[0] == 2]
    assert len(b.poset.elements) == len(complexes.cube_faces(b.poset.base_cube(top)))
    assert all(r.ok for r in realization.audit_chain_maps(b).values())
    assert all(r.ok for r in realization.verify_realization_conditions(b).values())


def test_split_fibre_instance():
    b = split_fibre_bundle()
    assert all(len(v) == 2 for v in b.poset.by_base.values())
    assert b.poset.audit() == []
    # the chain level still works; only the scale inequalities are out of reach
    assert all(r.ok for r in realization.audit_chain_maps(b).values())
    failing = {c.name for c in b.certificates if not c.holds}
    assert "2^-n < eps1/8" in failing


def test_flipped_lift_sign_is_caught():
    b = split_fibre_bundle()
    edge = next(j for j in sorted(b.poset.elements) if j[0] == 1)
    b.model.lift[edge] = {c: -v for c, v in b.model.lift[edge].items()}
    audits = realization.audit_chain_maps(b)
    assert not audits["cells_to_model"].ok
    assert audits["cells_to_model"].witness["reason"] == "boundary"


def test_flagship_poset_and_certificates(flagship):
    bundle, audits, conditions, _ = flagship
    assert bundle.poset.audit() == []
    assert all(c.holds for c in bundle.certificates)
    assert {c.name for c in bundle.certificates} >= {c.name for c in
                                                     realization.parameter_certificates(bundle.params)}
    manifest = realization.realization_manifest(bundle, conditions)
    assert set(manifest["conditions"]) == {"overlaps_in_balls", "small_composites", "round_trip_near",
                                           "local_over_compact"}


def test_combination_bound_on_small_body():
    body = ConvexBody.from_json({"generators": SPLIT_GENERATORS})
    for r in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
        assert realization.sampled_combination_bound(body, r) <= 2 * r


class TestBodyValidation:
    def test_roundtrip(self):
        body = realization.triangle_body()
        back = ConvexBody.from_json(body.to_json())
        assert back.sample == body.sample and back.generators == body.generators

    @pytest.mark.parametrize("data, message", [
        ({"generators": [["3/2", "0"]]}, "outside"),
        ({"generators": [["0", "0"], ["1", "1"]], "weights": [["1/2", "1/3"]]}, "convex"),
        ({"generators": [["0", "0"], ["1", "1"]], "weights": [["-1", "2"]]}, "convex"),
        ({"generators": [["0", "0"], ["1", "1"]], "weights": [["1/2", "1/2"]],
          "sample": [["1/4", "1/4"]]}, "disagrees"),
        ({"generators": [["0", "0"], ["1", "1"]], "weights": [["1/2", "1/2"], ["1/2", "1/2"]]}, "duplicate"),
        ({"generators": [["0", "0"]], "sample": [["1/2", "0"]]}, "certificate"),
        ({"generators": []}, "no generators"),
    ])
    def test_rejected(self, data, message):
        with pytest.raises(RealizationError, match=message):
            ConvexBody.from_json(data)


class TestRetraction:
    def test_collapse_of_path_onto_edge(self):
        path = complexes.path3()
        edge = complexes.SimplicialComplex([(0, 1)])
        rep = realization.check_algebraic_retraction(edge, path, realization.retraction_operator(path, {0: 0, 1: 1, 2: 1}))
        assert rep.ok

    def test_operator_moving_the_subcomplex(self):
        path = complexes.path3()
        edge = complexes.SimplicialComplex([(0, 1)])
        op = realization.retraction_operator(path, {0: 1, 1: 0, 2: 0})
        rep = realization.check_algebraic_retraction(edge, path, op)
        assert not rep.identity_ok and rep.witness["simplex"] == [0]

    def test_locality_failure(self):
        path = complexes.path3()
        edge = complexes.SimplicialComplex([(0, 1)])
        op = realization.retraction_operator(path, {0: 0, 1: 1, 2: 2})
        rep = realization.check_algebraic_retraction(edge, path, op, {1: {0}})
        assert rep.identity_ok and not rep.locality_ok and rep.witness["vertex"] == "1"

    def test_not_a_subcomplex(self):
        with pytest.raises(RealizationError):
            realization.check_algebraic_retraction(complexes.hollow_triangle(), complexes.path3(), {})
