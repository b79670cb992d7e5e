import random

import pytest

from conftest import random_lawful_data
from topoglue.errors import NotDetermined, ValidationFailed
from topoglue.fintop import SpaceMap, compose, identity_map, make_map, make_space
from topoglue.fixtures import arc3, disc2, gd_circ, pt, trivial_data
from topoglue.gdata import (
    GluingData,
    derive_triple_maps,
    evaluate,
    extract_data,
    functor_of,
    make_gluing_data,
    validate,
)
from topoglue.glidx import GlGen, hom, morphism_of, normalize, pair, single


def _mutated_transition(gd, key, table):
    new_transition = dict(gd.transition)
    old = new_transition[key]
    new_transition[key] = SpaceMap(old.dom, old.cod, table)
    return GluingData(
        index=gd.index,
        patch=gd.patch,
        overlap=gd.overlap,
        anchor=gd.anchor,
        transition=new_transition,
        triple_space=gd.triple_space,
        triple_proj=gd.triple_proj,
        triple_transition=gd.triple_transition,
    )


class TestValidate:
    def test_trivial_single_patch(self):
        rep = validate(trivial_data(arc3()))
        assert rep.passed, str(rep)

    def test_circle_data(self):
        rep = validate(gd_circ())
        assert rep.passed, str(rep)

    def test_non_inverse_transition_fails_with_witness(self):
        gd = gd_circ()
        bad = _mutated_transition(gd, ("2", "1"), {"a": "b", "b": "a"})
        rep = validate(bad)
        assert not rep.passed
        failed = [e for e in rep.failures() if e.name == "transition-inverse"]
        assert failed and failed[0].witness in ("a", "b")

    def test_missing_triples_reported(self):
        gd = gd_circ()
        stripped = GluingData(
            index=gd.index,
            patch=gd.patch,
            overlap=gd.overlap,
            anchor=gd.anchor,
            transition=gd.transition,
            triple_space=gd.triple_space,
            triple_proj=gd.triple_proj,
            triple_transition={},
        )
        rep = validate(stripped)
        assert not rep.passed
        assert any(e.name == "triple-present" for e in rep.failures())


def _ambiguous_instance():
    """Three patches where one anchor collapses two overlap points."""
    d = disc2()
    p = pt("P", "p")
    d23 = disc2()
    d32 = disc2()
    def m(dom, cod, table):
        return make_map(dom, cod, table)
    return make_gluing_data(
        ["1", "2", "3"],
        patch={"1": d, "2": d, "3": d},
        overlap={
            ("1", "2"): p, ("2", "1"): p,
            ("1", "3"): p, ("3", "1"): p,
            ("2", "3"): d23, ("3", "2"): d32,
        },
        anchor={
            ("1", "2"): m(p, d, {"p": "a"}),
            ("2", "1"): m(p, d, {"p": "a"}),
            ("1", "3"): m(p, d, {"p": "a"}),
            ("3", "1"): m(p, d, {"p": "a"}),
            ("2", "3"): m(d23, d, {"a": "a", "b": "a"}),  # collapses onto a
            ("3", "2"): m(d32, d, {"a": "a", "b": "b"}),
        },
        transition={
            ("1", "2"): m(p, p, {"p": "p"}),
            ("2", "1"): m(p, p, {"p": "p"}),
            ("1", "3"): m(p, p, {"p": "p"}),
            ("3", "1"): m(p, p, {"p": "p"}),
            ("2", "3"): m(d23, d32, {"a": "a", "b": "b"}),
            ("3", "2"): m(d32, d23, {"a": "a", "b": "b"}),
        },
    )


class TestDeriveTripleMaps:
    def test_single_patch_nothing_to_derive(self):
        gd = trivial_data(arc3())
        assert gd.triple_transition == {}

    def test_circle_derives_and_validates(self):
        gd = gd_circ()
        assert validate(gd).passed
        # every non-diagonal ordered triple slot is present
        for i in gd.index:
            for j in gd.index:
                for k in gd.index:
                    if i != j:
                        assert (i, j, k) in gd.triple_transition

    def test_collapsing_anchor_is_not_determined(self):
        with pytest.raises(NotDetermined) as info:
            derive_triple_maps(_ambiguous_instance())
        assert len(info.value.candidates) == 2

    def test_user_supplied_maps_win(self):
        base = gd_circ()
        supplied = dict(base.triple_transition)
        rebuilt = derive_triple_maps(
            make_gluing_data(
                base.index, base.patch, base.overlap, base.anchor, base.transition,
                supplied,
            )
        )
        assert rebuilt.triple_transition == supplied


class TestFunctorOf:
    def test_trivial(self):
        fun = functor_of(trivial_data(arc3()))
        assert fun.space(single("1")) == arc3()

    def test_circle_transition_image_is_homeomorphism(self):
        from topoglue.fintop import is_homeomorphism

        fun = functor_of(gd_circ())
        tau = morphism_of(GlGen("tau", ("1", "2")))
        assert is_homeomorphism(evaluate(fun, tau))

    def test_tau_roundtrip_is_identity(self):
        fun = functor_of(gd_circ())
        from topoglue.glidx import compose_hom

        t12 = morphism_of(GlGen("tau", ("1", "2")))
        t21 = morphism_of(GlGen("tau", ("2", "1")))
        img = evaluate(fun, compose_hom(t12, t21))
        assert img == identity_map(fun.space(pair("1", "2")))

    def test_invalid_data_raises(self):
        gd = gd_circ()
        bad = _mutated_transition(gd, ("2", "1"), {"a": "b", "b": "a"})
        with pytest.raises(ValidationFailed):
            functor_of(bad)


class TestEvaluate:
    def test_identity(self):
        fun = functor_of(gd_circ())
        a = pair("1", "2")
        from topoglue.glidx import identity as gl_id

        assert evaluate(fun, gl_id(a)) == identity_map(fun.space(a))

    def test_eta_is_the_anchor(self):
        gd = gd_circ()
        fun = functor_of(gd)
        eta = morphism_of(GlGen("eta", ("1", "2")))
        assert evaluate(fun, eta) == gd.anchor[("1", "2")]

    def test_path_independence(self):
        # two factorizations of the same morphism give the same map
        gd = gd_circ()
        fun = functor_of(gd)
        t = normalize(("1", "1", "2"))
        p = pair("2", "1")
        direct = hom(gd.index, t, p)
        assert direct is not None
        img_direct = evaluate(fun, direct)
        # alternate witness: out of the triple into [1,2], then transit
        from topoglue.glidx import compose_hom

        leg1 = hom(gd.index, t, pair("1", "2"))
        leg2 = hom(gd.index, pair("1", "2"), p)
        img_alt = evaluate(fun, compose_hom(leg2, leg1))
        assert img_direct == img_alt

    def test_all_two_step_paths_agree(self):
        gd = gd_circ()
        fun = functor_of(gd)
        from topoglue.glidx import compose_hom, generators

        gens = [m for m in generators(gd.index) if m.dom != m.cod]
        by_dom = {}
        for m in gens:
            by_dom.setdefault(m.dom, []).append(m)
        checked = 0
        for f in gens:
            for g in by_dom.get(f.cod, []):
                composite = compose_hom(g, f)
                lhs = evaluate(fun, composite)
                rhs = compose(evaluate(fun, f), evaluate(fun, g))
                assert lhs == rhs
                checked += 1
        assert checked > 0


class TestEvaluateErrors:
    def test_unknown_morphism(self):
        from topoglue.errors import UnknownMorphism
        from topoglue.glidx import GlMorphism, single

        fun = functor_of(gd_circ())
        ghost = GlMorphism(normalize(("1", "1", "2")), single("1"), ())
        with pytest.raises(UnknownMorphism):
            evaluate(fun, ghost)


class TestRepresentativeInvariance:
    def test_relabelled_overlaps_glue_homeomorphically(self):
        # renaming overlap points (an isomorphic presentation of the same
        # datum) must not change the glued space up to homeomorphism
        from topoglue.fintop import find_homeomorphism, make_space
        from topoglue.fixtures import arc3
        from topoglue.glue import glue

        base = gd_circ()
        renamed = make_space("D12x", ["x", "y"], {"x": ["x"], "y": ["y"]})
        rename = {"a": "x", "b": "y"}
        gd = make_gluing_data(
            ["1", "2"],
            patch=base.patch,
            overlap={("1", "2"): renamed, ("2", "1"): base.overlap[("2", "1")]},
            anchor={
                ("1", "2"): SpaceMap(renamed, base.patch["1"], {"x": "l", "y": "r"}),
                ("2", "1"): base.anchor[("2", "1")],
            },
            transition={
                ("1", "2"): SpaceMap(renamed, base.overlap[("2", "1")], {"x": "a", "y": "b"}),
                ("2", "1"): SpaceMap(base.overlap[("2", "1")], renamed, {"a": "x", "b": "y"}),
            },
        )
        gd = derive_triple_maps(gd)
        assert validate(gd).passed
        g1 = glue(base)
        g2 = glue(gd)
        assert find_homeomorphism(g1.space, g2.space) is not None


class TestRoundTrip:
    def test_circle_extracts_to_itself(self):
        gd = gd_circ()
        fun = functor_of(gd)
        back = extract_data(fun)
        assert back.index == gd.index
        assert back.patch == gd.patch
        assert back.overlap == gd.overlap
        assert back.anchor == gd.anchor
        assert back.transition == gd.transition
        assert back.triple_transition == gd.triple_transition
        assert validate(back).passed

    def test_random_lawful_data_round_trips(self):
        rng = random.Random(7)
        for _ in range(10):
            gd = random_lawful_data(rng)
            fun = functor_of(gd)
            back = extract_data(fun)
            assert back.anchor == gd.anchor
            assert back.transition == gd.transition
            assert back.triple_transition == gd.triple_transition

    def test_transition_invertibility(self):
        rng = random.Random(11)
        for _ in range(8):
            gd = random_lawful_data(rng)
            fun = functor_of(gd)
            for i in gd.index:
                for j in gd.index:
                    fwd = evaluate(fun, morphism_of(GlGen("tau", (i, j))))
                    bwd = evaluate(fun, morphism_of(GlGen("tau", (j, i))))
                    assert compose(bwd, fwd) == identity_map(gd.overlap[(i, j)])
