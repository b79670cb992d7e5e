"""Glued spaces: the standard quotient, cones, and the universal property.

The glued space of a gluing datum is the disjoint union of the patches modulo
the overlap relation, carrying the final topology.  The relation is emitted
raw (one pair per overlap point); lawful data already yields an equivalence
relation, so the quotient's union-find closure is asserted to add nothing and
any divergence is surfaced as a cocycle diagnostic instead of silently closed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import fintop, glidx
from .errors import (
    IllDefined,
    MissingLeg,
    NotCovering,
    NotEquivalence,
    ValidationFailed,
)
from .fintop import (
    FiniteSpace,
    SpaceMap,
    analyze_map,
    compose,
    coproduct_tag,
    disjoint_union,
    enumerate_continuous_maps,
    is_open,
)
from .gdata import CheckEntry, GluingData, _maps_equal, validate
from .glidx import GlObject, normalize, pair, single

CONE_MODES = ("full", "figure3", "figure4")


@dataclass
class Cone:
    """An apex with one leg per index-category object, in the continuous direction."""

    apex: FiniteSpace
    legs: dict[GlObject, SpaceMap]

    def leg(self, obj: GlObject) -> SpaceMap:
        if obj not in self.legs:
            raise MissingLeg(f"cone has no leg for {obj}")
        return self.legs[obj]


@dataclass
class GluedSpace:
    """The glued quotient with its legs and full provenance."""

    space: FiniteSpace
    legs: dict[GlObject, SpaceMap]
    relation: tuple[tuple[str, str], ...]
    classes: dict[str, frozenset[str]]
    coproduct: FiniteSpace
    projection: SpaceMap

    def leg(self, obj: GlObject) -> SpaceMap:
        if obj not in self.legs:
            raise MissingLeg(f"glued space has no leg for {obj}")
        return self.legs[obj]


def build_relation(gd: GluingData) -> list[tuple[str, str]]:
    """Raw identification pairs on the tagged disjoint union of patches.

    For each ordered pair (i,j) and each overlap point u, the anchor image of
    u in patch i is identified with the anchor image of the transited point in
    patch j.
    """
    report = validate(gd)
    if not report.passed:
        raise ValidationFailed(report)
    pairs = []
    for i in gd.index:
        for j in gd.index:
            anchor_ij = gd.anchor[(i, j)]
            anchor_ji = gd.anchor[(j, i)]
            trans = gd.transition[(i, j)]
            for u in sorted(gd.overlap[(i, j)].points):
                x = anchor_ij(u)
                y = anchor_ji(trans(u))
                pairs.append((coproduct_tag(x, i), coproduct_tag(y, j)))
    return sorted(set(pairs))


@dataclass
class EquivalenceReport:
    reflexive: bool
    symmetric: bool
    transitive: bool
    witness: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive

    def __str__(self):
        if self.passed:
            return "relation is an equivalence"
        return (
            f"reflexive={self.reflexive} symmetric={self.symmetric} "
            f"transitive={self.transitive} witness={self.witness}"
        )


def check_equivalence(relation: Iterable[tuple[str, str]], gd: GluingData) -> EquivalenceReport:
    """Check the raw relation itself (not its closure) is an equivalence.

    A transitivity failure is a cocycle diagnostic: it means the pair data do
    not cohere, and the witness triple names the offending points.
    """
    rel = set(relation)
    domain = set()
    for i in gd.index:
        for x in gd.patch[i].points:
            domain.add(coproduct_tag(x, i))
    reflexive = True
    refl_witness = None
    for p in sorted(domain):
        if (p, p) not in rel:
            reflexive = False
            refl_witness = (p,)
            break
    symmetric = True
    sym_witness = None
    for a, b in sorted(rel):
        if (b, a) not in rel:
            symmetric = False
            sym_witness = (a, b)
            break
    transitive = True
    trans_witness = None
    succ: dict[str, set[str]] = {}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
    for a in sorted(succ):
        for b in sorted(succ[a]):
            for c in sorted(succ.get(b, ())):
                if (a, c) not in rel:
                    transitive = False
                    trans_witness = (a, b, c)
                    break
            if trans_witness:
                break
        if trans_witness:
            break
    witness = refl_witness or sym_witness or trans_witness
    return EquivalenceReport(reflexive, symmetric, transitive, witness)


def glue(gd: GluingData) -> GluedSpace:
    """Quotient the patches by the overlap relation and assemble all legs.

    Pair legs factor through patch legs via the anchors; triple legs factor
    through pair legs via the pullback projections.
    """
    relation = build_relation(gd)
    eq = check_equivalence(relation, gd)
    if not eq.passed:
        raise NotEquivalence(eq.witness, f"overlap relation is not an equivalence: {eq}")
    total, injections = disjoint_union([gd.patch[i] for i in gd.index], list(gd.index))
    q, projection = fintop.quotient(total, relation)
    legs: dict[GlObject, SpaceMap] = {}
    for i, eps in zip(gd.index, injections):
        legs[single(i)] = compose(projection, eps)
    for i in gd.index:
        for j in gd.index:
            if i != j:
                legs[pair(i, j)] = compose(legs[single(i)], gd.anchor[(i, j)])
    for obj in glidx.objects(gd.index):
        if obj.arity == 3:
            i = obj.head
            j = obj.rest[0]
            legs[obj] = compose(legs[pair(i, j)], gd.triple_proj[(obj, j)])
    classes: dict[str, set[str]] = {qp: set() for qp in q.points}
    for x in total.points:
        classes[projection(x)].add(x)
    return GluedSpace(
        space=q,
        legs=legs,
        relation=tuple(relation),
        classes={k: frozenset(v) for k, v in classes.items()},
        coproduct=total,
        projection=projection,
    )


def complete_cone(
    gd: GluingData, apex: FiniteSpace, single_legs: Mapping[str, SpaceMap]
) -> Cone:
    """Extend patch legs to a full leg family using the forced factorizations."""
    legs: dict[GlObject, SpaceMap] = {}
    for i in gd.index:
        if i not in single_legs:
            raise MissingLeg(f"no leg for patch {i!r}")
        legs[single(i)] = single_legs[i]
    for i in gd.index:
        for j in gd.index:
            if i != j:
                legs[pair(i, j)] = compose(legs[single(i)], gd.anchor[(i, j)])
    for obj in glidx.objects(gd.index):
        if obj.arity == 3:
            j = obj.rest[0]
            legs[obj] = compose(legs[pair(obj.head, j)], gd.triple_proj[(obj, j)])
    return Cone(apex, legs)


def cone_of(glued: GluedSpace) -> Cone:
    return Cone(glued.space, dict(glued.legs))


def _leg_equal(a: SpaceMap, b: SpaceMap) -> bool:
    return _maps_equal(a, b) is None


def check_cone(gd: GluingData, cone: Cone, mode: str = "full") -> bool:
    """Evaluate the commuting conditions for a candidate cone.

    ``full`` checks every morphism of the index category; ``figure3`` checks
    the transition, anchor and projection triangles; ``figure4`` replaces the
    transition triangle with its through-the-patch form.  The three modes are
    equivalent verdicts for lawful data.
    """
    if mode not in CONE_MODES:
        raise ValueError(f"unknown cone mode {mode!r}")
    idx = gd.index
    if mode == "full":
        from .gdata import evaluate, functor_tables

        fun = functor_tables(gd)
        for a in glidx.objects(idx):
            for b in glidx.objects(idx):
                m = glidx.hom(idx, a, b)
                if m is None:
                    continue
                lhs = compose(cone.leg(a), evaluate(fun, m))
                if not _leg_equal(lhs, cone.leg(b)):
                    return False
        return True
    ok = True
    for i in idx:
        for j in idx:
            # anchor triangle: leg of [i,j] factors through patch leg i
            lhs = compose(cone.leg(single(i)), gd.anchor[(i, j)])
            if not _leg_equal(lhs, cone.leg(pair(i, j))):
                ok = False
            if mode == "figure3":
                # transition triangle: legs of opposite overlaps agree
                lhs = compose(cone.leg(pair(j, i)), gd.transition[(i, j)])
            else:
                # through-the-patch form of the same triangle
                lhs = compose(
                    compose(cone.leg(single(j)), gd.anchor[(j, i)]),
                    gd.transition[(i, j)],
                )
            if not _leg_equal(lhs, cone.leg(pair(i, j))):
                ok = False
    for i in idx:
        for j in idx:
            for k in idx:
                obj = normalize((i, j, k))
                if obj.arity != 3:
                    continue
                for n in (j, k):
                    lhs = compose(cone.leg(pair(i, n)), gd.triple_proj[(obj, n)])
                    if not _leg_equal(lhs, cone.leg(obj)):
                        ok = False
    return ok


@dataclass
class GluedPropertiesReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        return "\n".join(str(e) for e in self.entries)


def as_candidate(gd: GluingData, space: FiniteSpace, legs: Mapping[GlObject, SpaceMap]) -> GluedSpace:
    """Wrap a candidate (space, legs) as a glued-space-shaped value.

    Missing pair and triple legs are completed by the forced factorizations;
    provenance is recomputed from the patch legs.
    """
    singles = {i: legs[single(i)] for i in gd.index if single(i) in legs}
    cone = complete_cone(gd, space, singles)
    full = dict(cone.legs)
    for obj, leg in legs.items():
        full[obj] = leg
    classes: dict[str, set[str]] = {q: set() for q in space.points}
    for i in gd.index:
        leg = full[single(i)]
        for x in gd.patch[i].points:
            classes[leg(x)].add(coproduct_tag(x, i))
    total, _ = disjoint_union([gd.patch[i] for i in gd.index], list(gd.index))
    proj_table = {}
    for qp, mem in classes.items():
        for m in mem:
            proj_table[m] = qp
    projection = SpaceMap(total, space, proj_table) if len(proj_table) == len(total.points) else None
    return GluedSpace(
        space=space,
        legs=full,
        relation=(),
        classes={k: frozenset(v) for k, v in classes.items()},
        coproduct=total,
        projection=projection,
    )


def check_glued_properties(gd: GluingData, candidate: GluedSpace) -> GluedPropertiesReport:
    """The six named glued-object properties for a candidate (space, legs).

    (a) pair legs factor through the anchors; (b) triple legs factor through
    the projections; (c) the two routes across an overlap agree; (d) the patch
    leg images cover the space; (e) overlap images equal pairwise intersections
    of patch images; (f) every patch leg is injective and continuous.
    """
    rep = GluedPropertiesReport()
    idx = gd.index
    for i in idx:
        for j in idx:
            if i == j:
                continue
            w = _maps_equal(
                candidate.leg(pair(i, j)),
                compose(candidate.leg(single(i)), gd.anchor[(i, j)]),
            )
            rep.add("a-pair-factors", f"({i},{j})", w is None, w)
    for obj in glidx.objects(idx):
        if obj.arity != 3:
            continue
        i = obj.head
        ok = True
        wit = None
        for n in obj.rest:
            w = _maps_equal(
                candidate.leg(obj),
                compose(candidate.leg(pair(i, n)), gd.triple_proj[(obj, n)]),
            )
            if w is not None:
                ok = False
                wit = w
        rep.add("b-triple-factors", repr(obj), ok, wit)
    for i in idx:
        for j in idx:
            lhs = compose(candidate.leg(single(i)), gd.anchor[(i, j)])
            rhs = compose(
                compose(candidate.leg(single(j)), gd.anchor[(j, i)]),
                gd.transition[(i, j)],
            )
            w = _maps_equal(lhs, rhs)
            rep.add("c-overlap-agree", f"({i},{j})", w is None, w)
    covered = set()
    for i in idx:
        covered |= candidate.leg(single(i)).image()
    missing = sorted(candidate.space.points - covered)
    rep.add("d-covering", "all", not missing, missing[0] if missing else None)
    for i in idx:
        for j in idx:
            img_i = candidate.leg(single(i)).image()
            img_j = candidate.leg(single(j)).image()
            via_ij = compose(candidate.leg(single(i)), gd.anchor[(i, j)]).image()
            via_ji = compose(candidate.leg(single(j)), gd.anchor[(j, i)]).image()
            ok = via_ij == via_ji == (img_i & img_j)
            rep.add(
                "e-intersections",
                f"({i},{j})",
                ok,
                None if ok else f"{sorted(via_ij)} vs {sorted(via_ji)} vs {sorted(img_i & img_j)}",
            )
    for i in idx:
        r = analyze_map(candidate.leg(single(i)))
        rep.add(
            "f-leg-embedding-free",
            i,
            r.injective and r.continuous,
            None if r.injective and r.continuous else str(r.witnesses),
        )
    return rep


def mediate(gd: GluingData, glued: GluedSpace, cone: Cone) -> SpaceMap:
    """The unique map from the glued space matching the cone's patch legs.

    Well-definedness is verified on every identified pair; disagreement means
    the cone conditions were violated.  Continuity is automatic from the final
    topology but still checked.
    """
    table: dict[str, str] = {}
    for qp in sorted(glued.space.points):
        members = glued.classes.get(qp, frozenset())
        if not members:
            raise NotCovering(f"glued point {qp!r} has no provenance")
        values = set()
        for tagged in sorted(members):
            x, _, i = tagged.rpartition("@")
            values.add(cone.leg(single(i))(x))
        if len(values) != 1:
            raise IllDefined((qp, sorted(values)))
        table[qp] = values.pop()
    mu = SpaceMap(glued.space, cone.apex, table)
    r = analyze_map(mu)
    if not r.continuous:
        raise IllDefined((glued.space.space_id, "mediating map not continuous", r.witnesses))
    return mu


@dataclass
class UniversalReport:
    entries: list[CheckEntry] = field(default_factory=list)
    cones_checked: int = 0

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        head = f"{self.cones_checked} cones checked"
        return head + "\n" + "\n".join(str(e) for e in self.entries)


def default_apexes() -> list[FiniteSpace]:
    from .fixtures import arc3, disc2, pt, sierp

    return [pt(), sierp(), disc2(), arc3()]


def enumerate_cones(
    gd: GluingData, apex: FiniteSpace, budget: int = fintop.DEFAULT_MAP_BUDGET
) -> list[dict[str, SpaceMap]]:
    """All compatible patch-leg families into an apex (brute-force oracle)."""
    per_patch = [
        enumerate_continuous_maps(gd.patch[i], apex, budget) for i in gd.index
    ]
    out = []
    for combo in itertools.product(*per_patch):
        legs = dict(zip(gd.index, combo))
        ok = True
        for i in gd.index:
            for j in gd.index:
                lhs = compose(legs[i], gd.anchor[(i, j)])
                rhs = compose(
                    compose(legs[j], gd.anchor[(j, i)]), gd.transition[(i, j)]
                )
                if not _leg_equal(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(legs)
    return out


def verify_universal(
    gd: GluingData,
    glued: GluedSpace,
    apexes: Sequence[FiniteSpace] | None = None,
    budget: int = fintop.DEFAULT_MAP_BUDGET,
) -> UniversalReport:
    """Oracle for the universal property: every cone has exactly one mediator.

    For each apex, every compatible patch-leg family is enumerated and the
    continuous maps out of the glued space commuting with all legs are counted;
    exactly one must exist and it must agree with ``mediate``.
    """
    rep = UniversalReport()
    if apexes is None:
        apexes = default_apexes() + [glued.space]
    # A terminal cone must itself be a cone: a candidate whose legs do not
    # commute can still receive a unique map from every cone, so this check
    # is what rules out finer-than-lawful quotients.
    is_cone = check_cone(gd, Cone(glued.space, dict(glued.legs)), "figure4")
    rep.add("candidate-is-cone", glued.space.space_id, is_cone)
    for apex in apexes:
        candidates = enumerate_continuous_maps(glued.space, apex, budget)
        families = enumerate_cones(gd, apex, budget)
        rep.cones_checked += len(families)
        for fam in families:
            mediators = [
                h
                for h in candidates
                if all(
                    _leg_equal(compose(h, glued.leg(single(i))), fam[i])
                    for i in gd.index
                )
            ]
            if len(mediators) != 1:
                rep.add(
                    "unique-mediator",
                    apex.space_id,
                    False,
                    f"{len(mediators)} mediators for legs "
                    + str({i: sorted(fam[i].table.items()) for i in gd.index}),
                )
                continue
            if not is_cone:
                continue
            cone = complete_cone(gd, apex, fam)
            mu = mediate(gd, glued, cone)
            if not _leg_equal(mu, mediators[0]):
                rep.add("mediate-agrees", apex.space_id, False, "mediate differs from oracle")
        rep.add("apex-done", apex.space_id, True)
    return rep


@dataclass
class OtopReport:
    applicable: bool
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.applicable and all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        head = "applicable" if self.applicable else "not applicable (some map is not open)"
        return head + "\n" + "\n".join(str(e) for e in self.entries)


def check_otop(gd: GluingData, glued: GluedSpace) -> OtopReport:
    """Open-map strengthening: with all-open data, legs are open embeddings.

    When some anchor or transition is not an open map the report is marked
    not applicable, but the leg facts are still recorded.
    """
    applicable = True
    rep = OtopReport(True)
    for key in sorted(gd.anchor):
        if not analyze_map(gd.anchor[key]).open_map:
            applicable = False
            rep.add("data-open", f"anchor{key}", False, "not an open map")
    for key in sorted(gd.transition):
        if not analyze_map(gd.transition[key]).open_map:
            applicable = False
            rep.add("data-open", f"transition{key}", False, "not an open map")
    rep.applicable = applicable
    covered = set()
    for i in gd.index:
        leg = glued.leg(single(i))
        r = analyze_map(leg)
        rep.add("leg-embedding", i, r.embedding, None if r.embedding else str(r.witnesses))
        img = leg.image()
        rep.add("leg-image-open", i, is_open(glued.space, img))
        covered |= img
    rep.add("legs-cover", "all", covered == glued.space.points)
    return rep
