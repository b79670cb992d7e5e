import random

import pytest

from topoglue.errors import HypothesisBFailed, MissingComponent
from topoglue.fintop import (
    SpaceMap,
    compose,
    enumerate_continuous_maps,
    find_homeomorphism,
    identity_map,
    make_map,
)
from topoglue.fixtures import (
    arc3,
    c4,
    counter_meta,
    gd_circ,
    product_c4_c4,
    pt,
    torus_meta,
    trivial_data,
)
from topoglue.gdata import _maps_equal, functor_of
from topoglue.glidx import GlGen, morphism_of, normalize, objects, pair, single
from topoglue.glue import complete_cone, glue, mediate
from topoglue.refine import (
    GdfGluingData,
    IndexMap,
    Refinement,
    check_refinement,
    complete_refinement,
    compose_gdf,
    identity_refinement,
    induced_map,
    paste,
    reindex,
    reindex_morphism,
)

from test_glue import self_weld_arc


class TestReindex:
    def test_identity(self):
        gamma = IndexMap(("1", "2"), ("1", "2"), {"1": "1", "2": "2"})
        r = reindex(gamma)
        assert all(r.objects[o] == o for o in r.objects)
        assert all(r.gens[g] == g for g in r.gens)

    def test_constant_collapses_pairs(self):
        gamma = IndexMap(("1", "2"), ("*",), {"1": "*", "2": "*"})
        r = reindex(gamma)
        assert r.objects[pair("1", "2")] == single("*")
        eta = GlGen("eta", ("1", "2"))
        mapped = reindex_morphism(gamma, morphism_of(eta))
        assert mapped.dom == mapped.cod == single("*")

    def test_injective_relabel(self):
        gamma = IndexMap(("1", "2"), ("1", "2", "3"), {"1": "1", "2": "2"})
        r = reindex(gamma)
        assert r.objects[pair("1", "2")] == pair("1", "2")
        assert r.objects[normalize(("1", "1", "2"))] == normalize(("1", "1", "2"))

    def test_functoriality_on_relation_families(self):
        rng = random.Random(9)
        for _ in range(12):
            ni = rng.randint(1, 3)
            nj = rng.randint(1, 3)
            src = tuple(f"s{k}" for k in range(ni))
            dst = tuple(f"d{k}" for k in range(nj))
            gamma = IndexMap(src, dst, {i: rng.choice(dst) for i in src})
            from topoglue.glidx import compose_hom

            def tau3(i, j, k):
                return morphism_of(GlGen("tau3", (i, j, k)))

            def eta3(i, j, k, n):
                return morphism_of(GlGen("eta3", (i, j, k, n)))

            def eta(i, j):
                return morphism_of(GlGen("eta", (i, j)))

            def tau(i, j):
                return morphism_of(GlGen("tau", (i, j)))

            for i in src:
                for j in src:
                    for k in src:
                        pairs = [
                            (compose_hom(tau3(i, j, k), tau3(j, k, i)), tau3(i, k, j)),
                            (
                                compose_hom(eta3(i, j, k, j), eta(i, j)),
                                compose_hom(eta3(i, j, k, k), eta(i, k)),
                            ),
                            (
                                compose_hom(tau3(i, j, k), eta3(j, i, k, i)),
                                compose_hom(eta3(i, j, k, j), tau(i, j)),
                            ),
                            (compose_hom(tau(i, j), tau(j, i)), None),
                        ]
                        for lhs, rhs in pairs:
                            ml = reindex_morphism(gamma, lhs)
                            if rhs is None:
                                assert ml.dom == ml.cod  # an identity stays one
                            else:
                                assert ml == reindex_morphism(gamma, rhs)


class TestCheckRefinement:
    def test_identity_refinement(self):
        fun = functor_of(gd_circ())
        rep = check_refinement(identity_refinement(fun))
        assert rep.passed, str(rep)

    def test_torus_projection_edges(self):
        meta, _ = torus_meta()
        for key in meta.edge:
            rep = check_refinement(meta.edge[key])
            assert rep.passed, f"{key}: {rep}"

    def test_mutated_component_fails_with_witness(self):
        meta, _ = torus_meta()
        r = meta.edge[(single("1"), pair("1", "2"))]
        bad_comps = dict(r.components)
        obj = pair("1", "2")
        old = bad_comps[obj]
        table = dict(old.table)
        table["l|l"], table["r|l"] = table["r|l"], table["l|l"]
        bad_comps[obj] = SpaceMap(old.dom, old.cod, table)
        rep = check_refinement(Refinement(r.gamma, r.fine, r.coarse, bad_comps))
        assert not rep.passed
        assert any(e.witness for e in rep.entries if not e.ok)


class TestCompleteRefinement:
    def test_completes_pairs_and_triples(self):
        meta, _ = torus_meta()
        r = meta.edge[(single("1"), pair("1", "2"))]
        singles = {o: c for o, c in r.components.items() if o.arity == 1}
        rebuilt = complete_refinement(r.gamma, r.fine, r.coarse, singles)
        for obj in objects(("1", "2")):
            assert _maps_equal(rebuilt.component(obj), r.component(obj)) is None

    def test_not_forced_when_anchor_collapses(self):
        fun = functor_of(self_weld_arc())
        gamma = IndexMap(("1", "2"), ("1", "2"), {"1": "1", "2": "2"})
        singles = {
            single(i): identity_map(fun.space(single(i))) for i in ("1", "2")
        }
        with pytest.raises(MissingComponent):
            complete_refinement(gamma, fun, fun, singles)


class TestInducedMap:
    def test_identity_refinement_gives_identity(self):
        gd = gd_circ()
        fun = functor_of(gd)
        glued = glue(gd)
        mu = induced_map(identity_refinement(fun), glued, glued)
        assert mu == identity_map(glued.space)

    def test_torus_boundary_inclusion(self):
        meta, _ = torus_meta()
        r = meta.edge[(single("1"), pair("1", "2"))]
        glued_fine = glue(r.fine.data)
        glued_coarse = glue(r.coarse.data)
        mu = induced_map(r, glued_fine, glued_coarse)
        # boundary classes carry the same names as their cylinder classes
        assert mu.table == {p: p for p in glued_fine.space.points}

    def test_collapse_onto_trivial_coarse(self):
        fine = functor_of(trivial_data(arc3(), "1"))
        coarse = functor_of(trivial_data(pt(), "1"))
        gamma = IndexMap(("1",), ("1",), {"1": "1"})
        rho = make_map(arc3(), pt(), {x: "p" for x in arc3().points})
        r = Refinement(gamma, fine, coarse, {single("1"): rho})
        mu = induced_map(r, glue(fine.data), glue(coarse.data))
        assert set(mu.table.values()) == {"p@1"}

    def test_failing_refinement_is_rejected(self):
        from topoglue.errors import ValidationFailed

        meta, _ = torus_meta()
        r = meta.edge[(single("1"), pair("1", "2"))]
        bad_comps = dict(r.components)
        obj = pair("1", "2")
        old = bad_comps[obj]
        table = dict(old.table)
        table["l|l"], table["r|l"] = table["r|l"], table["l|l"]
        bad_comps[obj] = SpaceMap(old.dom, old.cod, table)
        bad = Refinement(r.gamma, r.fine, r.coarse, bad_comps)
        with pytest.raises(ValidationFailed):
            induced_map(bad, glue(r.fine.data), glue(r.coarse.data))

    def test_gamma_must_reach_every_fine_index(self):
        fine = functor_of(gd_circ())
        coarse = functor_of(trivial_data(c4(), "0"))
        gamma = IndexMap(("0",), ("1", "2"), {"0": "1"})
        rho = make_map(
            fine.space(single("1")), c4(), {"l": "l", "m": "ma", "r": "r"}
        )
        r = Refinement(gamma, fine, coarse, {single("0"): rho})
        with pytest.raises(MissingComponent):
            induced_map(r, glue(fine.data), glue(coarse.data))

    def test_unique_as_cone_morphism(self):
        # oracle: the induced map is the only continuous map commuting with
        # the component-transported legs; the refinement here swaps the two
        # arc patches of the circle gluing
        gd = gd_circ()
        fun = functor_of(gd)
        gamma = IndexMap(("1", "2"), ("1", "2"), {"1": "2", "2": "1"})
        singles = {
            single("1"): SpaceMap(gd.patch["2"], gd.patch["1"], {x: x for x in arc3().points}),
            single("2"): SpaceMap(gd.patch["1"], gd.patch["2"], {x: x for x in arc3().points}),
        }
        r = complete_refinement(gamma, fun, fun, singles)
        assert check_refinement(r).passed
        glued_fine = glue(r.fine.data)
        glued_coarse = glue(r.coarse.data)
        mu = induced_map(r, glued_fine, glued_coarse)
        assert mu.table == {"l@1": "l@1", "r@1": "r@1", "m@1": "m@2", "m@2": "m@1"}
        commuting = []
        for h in enumerate_continuous_maps(glued_fine.space, glued_coarse.space):
            ok = True
            for i in r.gamma.source:
                lhs = compose(h, glued_fine.leg(single(r.gamma(i))))
                rhs = compose(glued_coarse.leg(single(i)), r.component(single(i)))
                if _maps_equal(lhs, rhs) is not None:
                    ok = False
                    break
            if ok:
                commuting.append(h)
        assert commuting == [mu]


class TestPaste:
    def test_pasted_refinements_stay_refinements(self):
        meta, _ = torus_meta()
        t12 = meta.edge[(pair("2", "1"), pair("1", "2"))]  # bnd1 -> bnd2
        incl2 = meta.edge[(single("2"), pair("2", "1"))]  # bnd2 -> cyl2
        pasted = paste(incl2, t12)
        rep = check_refinement(pasted)
        assert rep.passed, str(rep)
        assert pasted.fine is t12.fine
        assert pasted.coarse is incl2.coarse


class TestComposeGdf:
    def test_single_node(self):
        fun = functor_of(trivial_data(arc3(), "1"))
        meta = GdfGluingData(("1",), {single("1"): fun}, {})
        composed, rep = compose_gdf(meta)
        assert rep.passed
        glued = glue(composed.data)
        assert find_homeomorphism(glued.space, arc3()) is not None

    def test_torus_pipeline(self):
        meta, seq = torus_meta()
        composed, rep = compose_gdf(meta)
        assert rep.passed, str(rep)
        torus_from_meta = glue(composed.data)
        torus_from_seq = glue(seq)
        assert len(torus_from_meta.space.points) == 16
        assert len(torus_from_seq.space.points) == 16
        assert find_homeomorphism(torus_from_meta.space, product_c4_c4()) is not None

    def test_two_stage_equals_sequential_via_mediators(self):
        meta, seq = torus_meta()
        composed, _ = compose_gdf(meta)
        g_meta = glue(composed.data)
        g_seq = glue(seq)
        cone_on_seq = complete_cone(
            composed.data, g_seq.space,
            {i: g_seq.leg(single(i)) for i in composed.data.index},
        )
        mu1 = mediate(composed.data, g_meta, cone_on_seq)
        cone_on_meta = complete_cone(
            seq, g_meta.space, {i: g_meta.leg(single(i)) for i in seq.index}
        )
        mu2 = mediate(seq, g_seq, cone_on_meta)
        assert compose(mu2, mu1) == identity_map(g_meta.space)
        assert compose(mu1, mu2) == identity_map(g_seq.space)

    def test_pushout_condition_failure_raises(self):
        with pytest.raises(HypothesisBFailed) as info:
            compose_gdf(counter_meta())
        assert info.value.key == ("1", "1", "2")

    def test_composed_data_is_open_map_data(self):
        from topoglue.glue import check_otop

        meta, seq = torus_meta()
        composed, _ = compose_gdf(meta)
        for gd in (composed.data, seq):
            glued = glue(gd)
            rep = check_otop(gd, glued)
            assert rep.applicable and rep.passed, str(rep)
