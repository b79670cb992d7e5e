"""Reindexing, refinement morphisms, induced maps, and meta gluing.

A refinement relates a fine gluing functor (over index set J) to a coarse one
(over I) through an index map gamma: I -> J and one component map per object
over I.  Components run in the continuous direction, from the fine functor's
space at the reindexed object to the coarse functor's space; this matches the
computable orientation of the worked fixtures, and the opposite-category
bookkeeping stays implicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import glidx
from .errors import (
    HypothesisBFailed,
    MissingComponent,
    ValidationFailed,
)
from .fintop import (
    SpaceMap,
    analyze_map,
    compose,
    identity_map,
    pair_tag,
)
from .gdata import (
    CheckEntry,
    GluingFunctor,
    _maps_equal,
    derive_triple_maps,
    evaluate,
    functor_of,
    make_gluing_data,
)
from .glidx import GlGen, GlMorphism, GlObject, normalize, pair, single
from .glue import Cone, GluedSpace, glue, mediate


@dataclass(frozen=True)
class IndexMap:
    """A total map between index sets."""

    source: tuple[str, ...]
    target: tuple[str, ...]
    table: Mapping[str, str]

    def __post_init__(self):
        for i in self.source:
            if i not in self.table:
                raise MissingComponent(f"index map undefined at {i!r}")
            if self.table[i] not in self.target:
                raise MissingComponent(f"index map leaves target at {i!r}")

    def __call__(self, i: str) -> str:
        return self.table[i]


def reindex_object(gamma: IndexMap, obj: GlObject) -> GlObject:
    raw = (obj.head,) + obj.rest
    return normalize(tuple(gamma(i) for i in raw))


def reindex_gen(gamma: IndexMap, gen: GlGen) -> GlGen:
    return GlGen(gen.kind, tuple(gamma(i) for i in gen.indices))


def reindex_morphism(gamma: IndexMap, m: GlMorphism) -> GlMorphism:
    """Image of a morphism: map the witness generators and renormalize."""
    dom = reindex_object(gamma, m.dom)
    cod = reindex_object(gamma, m.cod)
    witness = []
    for gen in m.witness:
        g2 = reindex_gen(gamma, gen)
        if g2.dom != g2.cod:
            witness.append(g2)
    return GlMorphism(dom, cod, tuple(witness))


@dataclass
class Reindexing:
    """Object and generator tables of the functor induced by an index map."""

    gamma: IndexMap
    objects: dict[GlObject, GlObject]
    gens: dict[GlGen, GlGen]


def reindex(gamma: IndexMap) -> Reindexing:
    objs = {o: reindex_object(gamma, o) for o in glidx.objects(gamma.source)}
    gens = {g: reindex_gen(gamma, g) for g in glidx.raw_generators(gamma.source)}
    return Reindexing(gamma, objs, gens)


@dataclass
class Refinement:
    """An index map with one component per coarse object, fine-to-coarse."""

    gamma: IndexMap
    fine: GluingFunctor
    coarse: GluingFunctor
    components: dict[GlObject, SpaceMap]

    def component(self, obj: GlObject) -> SpaceMap:
        if obj not in self.components:
            raise MissingComponent(f"refinement has no component at {obj}")
        return self.components[obj]


def identity_refinement(fun: GluingFunctor) -> Refinement:
    gamma = IndexMap(fun.index, fun.index, {i: i for i in fun.index})
    comps = {o: identity_map(fun.space(o)) for o in glidx.objects(fun.index)}
    return Refinement(gamma, fun, fun, comps)


def complete_refinement(
    gamma: IndexMap,
    fine: GluingFunctor,
    coarse: GluingFunctor,
    components: Mapping[GlObject, SpaceMap],
) -> Refinement:
    """Fill missing pair and triple components where commutation forces them.

    A missing pair component must land in the fiber of the coarse anchor over
    the known patch component; a missing triple component is assembled from
    its two pair coordinates.  Anything not uniquely forced raises
    ``MissingComponent``.
    """
    comps = dict(components)
    for i in gamma.source:
        if single(i) not in comps:
            raise MissingComponent(f"patch component for {i!r} must be given")
    for i in gamma.source:
        for j in gamma.source:
            obj = pair(i, j)
            if obj in comps or obj.arity == 1:
                continue
            fine_sp = fine.space(reindex_object(gamma, obj))
            eta = glidx.hom(gamma.source, single(i), obj)
            fine_eta = evaluate(fine, reindex_morphism(gamma, eta))
            known = compose(comps[single(i)], fine_eta)
            anchor = coarse.data.anchor[(i, j)]
            fibers: dict[str, list[str]] = {}
            for u in sorted(anchor.dom.points):
                fibers.setdefault(anchor(u), []).append(u)
            table = {}
            for t in sorted(fine_sp.points):
                cand = fibers.get(known(t), [])
                if len(cand) != 1:
                    raise MissingComponent(
                        f"pair component {obj} not uniquely forced at {t!r}"
                    )
                table[t] = cand[0]
            comps[obj] = SpaceMap(fine_sp, coarse.space(obj), table)
    for obj in glidx.objects(gamma.source):
        if obj.arity != 3 or obj in comps:
            continue
        i = obj.head
        j, k = obj.rest
        fine_sp = fine.space(reindex_object(gamma, obj))
        target = coarse.space(obj)
        legs = {}
        for n in (j, k):
            eta3 = glidx.hom(gamma.source, pair(i, n), obj)
            fine_proj = evaluate(fine, reindex_morphism(gamma, eta3))
            legs[n] = compose(comps[pair(i, n)], fine_proj)
        table = {}
        for t in sorted(fine_sp.points):
            tag = pair_tag(legs[j](t), legs[k](t))
            if tag not in target.points:
                raise MissingComponent(
                    f"triple component {obj} coordinates fall outside the pullback at {t!r}"
                )
            table[t] = tag
        comps[obj] = SpaceMap(fine_sp, target, table)
    return Refinement(gamma, fine, coarse, comps)


@dataclass
class RefinementReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        return "\n".join(str(e) for e in self.entries)


def check_refinement(r: Refinement) -> RefinementReport:
    """Verify every naturality square over the coarse index's generators."""
    rep = RefinementReport()
    for m in glidx.generators(r.gamma.source):
        if m.dom == m.cod:
            continue
        a, b = m.dom, m.cod
        try:
            rho_a = r.component(a)
            rho_b = r.component(b)
        except MissingComponent as exc:
            rep.add("component-present", f"{a}->{b}", False, str(exc))
            continue
        fine_img = evaluate(r.fine, reindex_morphism(r.gamma, m))
        lhs = compose(rho_a, fine_img)
        rhs = compose(evaluate(r.coarse, m), rho_b)
        w = _maps_equal(lhs, rhs)
        rep.add("naturality", f"{a}->{b}", w is None, w)
    for obj, comp in sorted(r.components.items(), key=lambda kv: repr(kv[0])):
        ra = analyze_map(comp)
        rep.add(
            "component-continuous", repr(obj), ra.continuous,
            None if ra.continuous else str(ra.witnesses),
        )
    return rep


def paste(outer: Refinement, inner: Refinement) -> Refinement:
    """Compose two refinements component-wise.

    ``inner`` runs from the finest functor to the middle one and ``outer``
    from the middle one to the coarsest; the paste runs finest to coarsest.
    """
    if inner.coarse.obj != outer.fine.obj:
        raise MissingComponent("pasted refinements do not share a middle functor")
    gamma = IndexMap(
        outer.gamma.source,
        inner.gamma.target,
        {i: inner.gamma(outer.gamma(i)) for i in outer.gamma.source},
    )
    comps = {}
    for obj in glidx.objects(outer.gamma.source):
        mid = reindex_object(outer.gamma, obj)
        comps[obj] = compose(outer.component(obj), inner.component(mid))
    return Refinement(gamma, inner.fine, outer.coarse, comps)


def induced_map(
    r: Refinement, glued_fine: GluedSpace, glued_coarse: GluedSpace
) -> SpaceMap:
    """The unique map of glued spaces induced by a refinement.

    Determined by sending the image of each fine patch leg through the
    matching component and coarse leg; computed as the mediating map of the
    cone this builds on the fine gluing.  The index map must reach every fine
    index, and collapsed indices must agree on their induced leg.
    """
    rep = check_refinement(r)
    if not rep.passed:
        raise ValidationFailed(rep, "refinement does not check")
    legs: dict[str, SpaceMap] = {}
    for j in r.fine.index:
        sources = [i for i in r.gamma.source if r.gamma(i) == j]
        if not sources:
            raise MissingComponent(
                f"index map misses fine index {j!r}; induced map is not determined"
            )
        candidates = [
            compose(glued_coarse.leg(single(i)), r.component(single(i)))
            for i in sources
        ]
        for other in candidates[1:]:
            if _maps_equal(candidates[0], other) is not None:
                raise MissingComponent(
                    f"collapsed indices {sources} disagree on the leg for {j!r}"
                )
        legs[j] = candidates[0]
    cone = Cone(glued_coarse.space, {single(j): legs[j] for j in r.fine.index})
    return mediate(r.fine.data, glued_fine, cone)


@dataclass
class GdfGluingData:
    """Gluing data whose nodes are gluing functors and edges are refinements.

    ``edge[(a, b)]`` is the refinement realizing the generator a -> b, with
    fine functor ``node[b]`` and coarse functor ``node[a]``.
    """

    index: tuple[str, ...]
    node: dict[GlObject, GluingFunctor]
    edge: dict[tuple[GlObject, GlObject], Refinement]


@dataclass
class ComposeReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        return "\n".join(str(e) for e in self.entries)


def compose_gdf(meta: GdfGluingData) -> tuple[GluingFunctor, ComposeReport]:
    """Glue every node and assemble the glued spaces into one gluing functor.

    Patches and overlaps of the composed datum are glued node spaces; anchors
    and transitions are the induced maps of the edges.  Triple spaces are the
    canonical pullbacks of the composed anchors, with transitions derived.
    For each triple node present, the map into the pullback of its glued pair
    spaces assembled from the projection edges must be an isomorphism;
    ``HypothesisBFailed`` reports any triple where it is not.
    """
    rep = ComposeReport()
    idx = tuple(sorted(set(meta.index)))
    glued: dict[GlObject, GluedSpace] = {}
    for obj in sorted(meta.node, key=repr):
        glued[obj] = glue(meta.node[obj].data)
        rep.add("node-glued", repr(obj), True, f"{len(glued[obj].space.points)} points")
    for key in sorted(meta.edge, key=repr):
        a, b = key
        r = meta.edge[key]
        edge_rep = check_refinement(r)
        rep.add("edge-checks", f"{a}->{b}", edge_rep.passed)
        if not edge_rep.passed:
            raise ValidationFailed(edge_rep, f"edge {a}->{b} does not check")

    def induced(a: GlObject, b: GlObject) -> SpaceMap:
        if a == b:
            return identity_map(glued[a].space)
        if (a, b) not in meta.edge:
            raise MissingComponent(f"meta gluing has no edge for {a}->{b}")
        return induced_map(meta.edge[(a, b)], glued[b], glued[a])

    patch = {i: glued[single(i)].space for i in idx}
    overlap = {}
    anchor = {}
    transition = {}
    for i in idx:
        for j in idx:
            if i == j:
                continue
            overlap[(i, j)] = glued[pair(i, j)].space
            anchor[(i, j)] = induced(single(i), pair(i, j))
            transition[(i, j)] = induced(pair(j, i), pair(i, j))
    composed = derive_triple_maps(
        make_gluing_data(idx, patch, overlap, anchor, transition)
    )
    for obj in glidx.objects(idx):
        if obj.arity != 3:
            continue
        if obj not in meta.node:
            rep.add("pushout-condition", repr(obj), True, "no node given; skipped")
            continue
        i = obj.head
        j, k = obj.rest
        target = composed.triple_space[obj]
        mj = induced(pair(i, j), obj)
        mk = induced(pair(i, k), obj)
        table = {}
        ok = True
        witness = None
        for q in sorted(glued[obj].space.points):
            tag = pair_tag(mj(q), mk(q))
            if tag not in target.points:
                ok = False
                witness = f"{q!r} lands outside the pullback"
                break
            table[q] = tag
        if ok:
            canonical = SpaceMap(glued[obj].space, target, table)
            ra = analyze_map(canonical)
            iso = ra.continuous and ra.injective and ra.surjective and ra.open_map
            if not iso:
                ok = False
                witness = f"canonical map is not an isomorphism: {ra.witnesses}"
        rep.add("pushout-condition", repr(obj), ok, witness)
        if not ok:
            raise HypothesisBFailed(i, j, k, f"triple {obj}: {witness}")
    fun = functor_of(composed)
    rep.add("composed-validates", "all", True)
    return fun, rep
