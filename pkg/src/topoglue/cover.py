"""Gluing coverings and the Grothendieck-topology axioms.

A gluing covering of a base space is a family of injective continuous maps
whose images cover the base; the open kind additionally requires every leg to
be an open map.  Coverings convert to gluing data (overlaps are pullbacks of
leg pairs) and back (the patch legs of a glued space cover it), and the three
site axioms are verified per instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import fintop
from .errors import ValidationFailed
from .fintop import (
    FiniteSpace,
    SpaceMap,
    analyze_map,
    compose,
    is_homeomorphism,
    pair_tag,
    pullback,
)
from .gdata import CheckEntry, GluingData, derive_triple_maps, make_gluing_data
from .glidx import single
from .glue import Cone, GluedSpace, glue, mediate

KINDS = ("gluing", "open")


@dataclass
class Covering:
    base: FiniteSpace
    family: list[tuple[FiniteSpace, SpaceMap]]
    kind: str = "gluing"

    def legs(self) -> list[SpaceMap]:
        return [leg for _, leg in self.family]


@dataclass
class CoveringReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        return "\n".join(str(e) for e in self.entries)


def check_covering(c: Covering) -> CoveringReport:
    """Validate the leg conditions for the covering's kind, plus coverage."""
    rep = CoveringReport()
    if c.kind not in KINDS:
        rep.add("kind", c.kind, False, "unknown kind")
        return rep
    covered: set[str] = set()
    for pos, (patch, leg) in enumerate(c.family):
        subject = f"leg{pos}({patch.space_id})"
        ok_typing = leg.dom == patch and leg.cod == c.base
        rep.add("leg-typing", subject, ok_typing)
        if not ok_typing:
            continue
        r = analyze_map(leg)
        rep.add("leg-injective", subject, r.injective, None if r.injective else str(r.witnesses))
        rep.add("leg-continuous", subject, r.continuous, None if r.continuous else str(r.witnesses))
        if c.kind == "open":
            rep.add("leg-open", subject, r.open_map, None if r.open_map else str(r.witnesses))
        covered |= leg.image()
    missing = sorted(c.base.points - covered)
    rep.add("coverage", "base", not missing, missing[0] if missing else None)
    return rep


def data_of_covering(c: Covering) -> GluingData:
    """The canonical gluing data of a covering.

    Patches are the covering's own patches, overlaps are the pullbacks of leg
    pairs with the projections as anchors, and transitions swap coordinates.
    """
    idx = [str(n) for n in range(len(c.family))]
    patch = {i: sp for i, (sp, _) in zip(idx, c.family)}
    legs = {i: leg for i, (_, leg) in zip(idx, c.family)}
    overlap = {}
    anchor = {}
    transition = {}
    for i in idx:
        for j in idx:
            if i == j:
                continue
            sp, pi, pj = pullback(legs[i], legs[j])
            overlap[(i, j)] = sp
            anchor[(i, j)] = pi
            swapped = {
                pair_tag(u, v): pair_tag(v, u)
                for u, v in (
                    (pi(t), pj(t)) for t in sp.points
                )
            }
            transition[(i, j)] = ("swap", sp, swapped)
    # second pass: transitions need both pullbacks to exist first
    for key, (_, sp, swapped) in list(transition.items()):
        i, j = key
        transition[key] = SpaceMap(sp, overlap[(j, i)], swapped)
    return derive_triple_maps(make_gluing_data(idx, patch, overlap, anchor, transition))


@dataclass
class CoverFunctorResult:
    data: GluingData
    glued: GluedSpace
    iso: SpaceMap
    report: CoveringReport


def functor_of_covering(c: Covering) -> CoverFunctorResult:
    """Build the canonical gluing data of a covering and glue it back.

    The glued space must reconstruct the base: the mediating map of the
    original legs is checked to be a homeomorphism, and the overlap images
    must realize the pairwise intersections of leg images.
    """
    pre = check_covering(c)
    if not pre.passed:
        raise ValidationFailed(pre, "not a covering")
    gd = data_of_covering(c)
    glued = glue(gd)
    idx = gd.index
    legs = {i: leg for i, (_, leg) in zip(idx, c.family)}
    cone = Cone(c.base, {single(i): legs[i] for i in idx})
    mu = mediate(gd, glued, cone)
    rep = CoveringReport()
    rep.add("glued-size", "points", len(glued.space.points) == len(c.base.points))
    rep.add("mediate-iso", "base", is_homeomorphism(mu))
    for i in idx:
        for j in idx:
            via = compose(legs[i], gd.anchor[(i, j)]).image()
            expect = legs[i].image() & legs[j].image()
            rep.add(
                "intersection-images",
                f"({i},{j})",
                via == expect,
                None if via == expect else f"{sorted(via)} != {sorted(expect)}",
            )
    return CoverFunctorResult(gd, glued, mu, rep)


def covering_of_glued(gd: GluingData, glued: GluedSpace) -> Covering:
    """The patch legs of a glued space, as a covering of it.

    The kind is open exactly when every anchor and transition of the datum is
    an open map.
    """
    all_open = all(
        analyze_map(m).open_map
        for m in itertools.chain(gd.anchor.values(), gd.transition.values())
    )
    family = [(gd.patch[i], glued.leg(single(i))) for i in gd.index]
    return Covering(glued.space, family, "open" if all_open else "gluing")


def site_axiom_iso(phi: SpaceMap) -> bool:
    """A single isomorphism is a covering (of either kind)."""
    if not is_homeomorphism(phi):
        return False
    singleton = Covering(phi.cod, [(phi.dom, phi)], "open")
    return check_covering(singleton).passed


def site_axiom_compose(
    c: Covering, sub: Sequence[Covering]
) -> tuple[Covering, bool]:
    """Compose each patch's subcovering with the patch leg and revalidate."""
    if len(sub) != len(c.family):
        raise ValidationFailed(check_covering(c), "one subcovering per patch required")
    family = []
    for (patch, leg), subcov in zip(c.family, sub):
        if subcov.base != patch:
            return Covering(c.base, [], c.kind), False
        for small, ell in subcov.family:
            family.append((small, compose(leg, ell)))
    out = Covering(c.base, family, c.kind)
    return out, check_covering(out).passed


def site_axiom_basechange(c: Covering, phi: SpaceMap) -> tuple[Covering, bool]:
    """Pull the covering back along a map into the base and revalidate.

    Finite spaces always have pullbacks, so the existence hypothesis of the
    axiom is vacuous here.
    """
    if phi.cod != c.base:
        raise ValidationFailed(check_covering(c), "map must land in the covering's base")
    family = []
    for patch, leg in c.family:
        sp, _, proj_v = pullback(leg, phi)
        family.append((sp, proj_v))
    out = Covering(phi.dom, family, c.kind)
    return out, check_covering(out).passed


def random_space(rng, max_points: int = 8, space_id: str = "rand") -> FiniteSpace:
    """A random finite space: a random generating family of opens."""
    n = rng.randint(1, max_points)
    points = [f"p{k}" for k in range(n)]
    gens = []
    for _ in range(rng.randint(0, 2 * n)):
        size = rng.randint(1, n)
        gens.append(rng.sample(points, size))
    return fintop.from_opens(space_id, points, gens)


def random_covering(rng, base: FiniteSpace, kind: str = "gluing") -> Covering:
    """A random covering of a base by subspace inclusions.

    For the open kind the patches are unions of minimal opens, so every
    inclusion is an open map.
    """
    points = sorted(base.points)
    family = []
    covered: set[str] = set()
    while covered != set(points):
        if kind == "open":
            seeds = rng.sample(points, rng.randint(1, len(points)))
            subset: set[str] = set()
            for s in seeds:
                subset |= base.min_open[s]
        else:
            subset = set(rng.sample(points, rng.randint(1, len(points))))
        leftover = set(points) - covered
        if not subset & leftover:
            subset.add(rng.choice(sorted(leftover)))
            if kind == "open":
                extra = subset - covered
                for s in sorted(extra):
                    subset |= base.min_open[s]
        sp, incl = fintop.subspace(base, subset)
        family.append((sp, incl))
        covered |= subset
        if len(family) > 3 * len(points):
            break
    return Covering(base, family, kind)
