"""Concrete gluing data over finite spaces and its functor realization.

A gluing datum over an index set I consists of a patch space per index, an
overlap space with an anchor map into the first patch per ordered pair, a
transition map between opposite overlaps, and a transition per ordered index
triple between the canonical triple spaces.  The triple space of [i,j,k] is
always the pullback of the two anchors out of overlaps (i,j) and (i,k); the
freedom to choose any pullback is resolved by this fixed representative.

All stored maps are the continuous direction; the index-category arrows they
realize point the other way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import fintop, glidx
from .errors import NotDetermined, UnknownMorphism, ValidationFailed
from .fintop import FiniteSpace, SpaceMap, analyze_map, compose, identity_map
from .glidx import GlGen, GlMorphism, GlObject, normalize


@dataclass
class CheckEntry:
    name: str
    subject: str
    ok: bool
    witness: str | None = None

    def __str__(self):
        status = "ok" if self.ok else "FAIL"
        tail = "" if self.witness is None else f" (witness: {self.witness})"
        return f"{status:4} {self.name} {self.subject}{tail}"


@dataclass
class ValidationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.ok]

    def add(self, name, subject, ok, witness=None):
        self.entries.append(CheckEntry(name, subject, ok, witness))

    def __str__(self):
        return "\n".join(str(e) for e in self.entries)


@dataclass
class GluingData:
    """Validated-or-not gluing data; treat as immutable once built."""

    index: tuple[str, ...]
    patch: dict[str, FiniteSpace]
    overlap: dict[tuple[str, str], FiniteSpace]
    anchor: dict[tuple[str, str], SpaceMap]
    transition: dict[tuple[str, str], SpaceMap]
    triple_space: dict[GlObject, FiniteSpace]
    triple_proj: dict[tuple[GlObject, str], SpaceMap]
    triple_transition: dict[tuple[str, str, str], SpaceMap]

    def space_of(self, obj: GlObject) -> FiniteSpace:
        if obj.arity == 1:
            return self.patch[obj.head]
        if obj.arity == 2:
            return self.overlap[(obj.head, obj.rest[0])]
        return self.triple_space[obj]

    def coord_map(self, i: str, j: str, k: str) -> SpaceMap:
        """The map from the space of [i,j,k] onto overlap (i,j).

        For a genuine triple this is the stored pullback projection; when the
        tuple collapses to the pair (i,j) it is the identity.
        """
        obj = normalize((i, j, k))
        if obj.arity == 3:
            return self.triple_proj[(obj, j)]
        return identity_map(self.space_of(obj))

    def triple_map(self, i: str, j: str, k: str) -> SpaceMap:
        """The transition from the space of [i,j,k] to the space of [j,i,k]."""
        if i == j:
            return identity_map(self.space_of(normalize((i, j, k))))
        return self.triple_transition[(i, j, k)]


def _triple_tables(index, overlap, anchor):
    spaces: dict[GlObject, FiniteSpace] = {}
    projs: dict[tuple[GlObject, str], SpaceMap] = {}
    for obj in glidx.objects(index):
        if obj.arity != 3:
            continue
        i = obj.head
        j, k = obj.rest
        sp, pj, pk = fintop.pullback(anchor[(i, j)], anchor[(i, k)])
        sp = FiniteSpace(f"T[{i},{j},{k}]", sp.points, sp.min_open)
        spaces[obj] = sp
        projs[(obj, j)] = SpaceMap(sp, pj.cod, dict(pj.table))
        projs[(obj, k)] = SpaceMap(sp, pk.cod, dict(pk.table))
    return spaces, projs


def make_gluing_data(
    index: Iterable[str],
    patch: Mapping[str, FiniteSpace],
    overlap: Mapping[tuple[str, str], FiniteSpace],
    anchor: Mapping[tuple[str, str], SpaceMap],
    transition: Mapping[tuple[str, str], SpaceMap],
    triple_transition: Mapping[tuple[str, str, str], SpaceMap] | None = None,
) -> GluingData:
    """Assemble gluing data, filling the forced diagonal entries.

    Diagonal overlaps default to the patches with identity anchor and
    transition.  Triple spaces and their projections are computed as the
    canonical pullbacks; triple transitions are taken as given (use
    ``derive_triple_maps`` to fill them when they are forced).
    """
    idx = tuple(sorted(set(index)))
    for label in idx:
        if "@" in label:
            # '@' separates point tags from patch labels in the coproduct
            raise KeyError(f"index label {label!r} must not contain '@'")
    patch = dict(patch)
    overlap = dict(overlap)
    anchor = dict(anchor)
    transition = dict(transition)
    for i in idx:
        overlap.setdefault((i, i), patch[i])
        anchor.setdefault((i, i), identity_map(patch[i]))
        transition.setdefault((i, i), identity_map(overlap[(i, i)]))
    missing = [
        key
        for i in idx
        for j in idx
        for key, table in (((i, j), overlap), ((i, j), anchor), ((i, j), transition))
        if key not in table
    ]
    if missing:
        raise KeyError(f"gluing data is missing entries for pairs {sorted(set(missing))}")
    spaces, projs = _triple_tables(idx, overlap, anchor)
    return GluingData(
        index=idx,
        patch=patch,
        overlap=overlap,
        anchor=anchor,
        transition=transition,
        triple_space=spaces,
        triple_proj=projs,
        triple_transition=dict(triple_transition or {}),
    )


def derive_triple_maps(gd: GluingData) -> GluingData:
    """Fill every missing triple transition with its unique compatible map.

    For a point t of the [i,j,k]-space, the candidate images are the points of
    the [j,i,k]-space whose (j,i)-coordinate equals the transition image of
    t's (i,j)-coordinate.  Anything but exactly one candidate raises
    ``NotDetermined``: the map must then be supplied explicitly.
    """
    derived = dict(gd.triple_transition)
    for i in gd.index:
        for j in gd.index:
            for k in gd.index:
                if i == j or (i, j, k) in derived:
                    continue
                dom_sp = gd.space_of(normalize((i, j, k)))
                cod_sp = gd.space_of(normalize((j, i, k)))
                out_coord = gd.coord_map(i, j, k)
                in_coord = gd.coord_map(j, i, k)
                phi = gd.transition[(i, j)]
                table = {}
                for t in sorted(dom_sp.points):
                    target = phi(out_coord(t))
                    cands = [u for u in sorted(cod_sp.points) if in_coord(u) == target]
                    if len(cands) != 1:
                        raise NotDetermined(i, j, k, t, cands)
                    table[t] = cands[0]
                derived[(i, j, k)] = SpaceMap(dom_sp, cod_sp, table)
    return GluingData(
        index=gd.index,
        patch=gd.patch,
        overlap=gd.overlap,
        anchor=gd.anchor,
        transition=gd.transition,
        triple_space=gd.triple_space,
        triple_proj=gd.triple_proj,
        triple_transition=derived,
    )


def _maps_equal(f: SpaceMap, g: SpaceMap) -> str | None:
    """None when equal, else a witness point (or a shape mismatch marker)."""
    if f.dom != g.dom or f.cod != g.cod:
        return "<endpoint mismatch>"
    for x in sorted(f.dom.points):
        if f(x) != g(x):
            return x
    return None


def validate(gd: GluingData) -> ValidationReport:
    """Check the gluing-data laws clause by clause.

    a) the diagonal overlap is the patch; b) diagonal anchor and transition
    are identities; continuity of every anchor and transition; the inverse law
    for opposite transitions; presence of all triple transitions; the cocycle
    law for composed triple transitions; and the projection square tying
    triple transitions to pair transitions.

    The transition out of the [i,j,k]-space always lands in the [j,i,k]-space
    (first two indices swapped, third carried along); the cocycle and
    projection-square clauses are typed accordingly.  Degenerate triples such
    as [i,i,k] stay distinct objects (isomorphic to their pair through the
    index category, never identified with it) and are flagged for the reader.
    """
    rep = ValidationReport()
    for obj in glidx.objects(gd.index):
        if obj.arity == 3 and obj.head in obj.rest:
            rep.add(
                "degenerate-triple", repr(obj), True,
                "kept distinct from its pair object; canonically isomorphic",
            )
    for i in gd.index:
        rep.add("overlap-diagonal", f"({i},{i})", gd.overlap[(i, i)] == gd.patch[i])
        rep.add(
            "anchor-diagonal",
            f"({i},{i})",
            _maps_equal(gd.anchor[(i, i)], identity_map(gd.patch[i])) is None,
        )
        rep.add(
            "transition-diagonal",
            f"({i},{i})",
            _maps_equal(gd.transition[(i, i)], identity_map(gd.overlap[(i, i)])) is None,
        )
    for i in gd.index:
        for j in gd.index:
            a = gd.anchor[(i, j)]
            t = gd.transition[(i, j)]
            ok_a = a.dom == gd.overlap[(i, j)] and a.cod == gd.patch[i]
            ok_t = t.dom == gd.overlap[(i, j)] and t.cod == gd.overlap[(j, i)]
            rep.add("anchor-typing", f"({i},{j})", ok_a)
            rep.add("transition-typing", f"({i},{j})", ok_t)
            if ok_a:
                ra = analyze_map(a)
                rep.add(
                    "anchor-continuous",
                    f"({i},{j})",
                    ra.continuous,
                    None if ra.continuous else str(ra.witnesses),
                )
            if ok_t:
                rt = analyze_map(t)
                rep.add(
                    "transition-continuous",
                    f"({i},{j})",
                    rt.continuous,
                    None if rt.continuous else str(rt.witnesses),
                )
    for i in gd.index:
        for j in gd.index:
            w = _maps_equal(
                compose(gd.transition[(j, i)], gd.transition[(i, j)]),
                identity_map(gd.overlap[(i, j)]),
            )
            rep.add("transition-inverse", f"({i},{j})", w is None, w)
    missing = [
        (i, j, k)
        for i in gd.index
        for j in gd.index
        for k in gd.index
        if i != j and (i, j, k) not in gd.triple_transition
    ]
    for key in missing:
        rep.add("triple-present", str(key), False, "missing triple transition")
    if missing:
        return rep
    for i in gd.index:
        for j in gd.index:
            for k in gd.index:
                sub = f"({i},{j},{k})"
                fwd = gd.triple_map(i, j, k)
                tc = analyze_map(fwd)
                rep.add(
                    "triple-continuous", sub, tc.continuous,
                    None if tc.continuous else str(tc.witnesses),
                )
                w = _maps_equal(
                    compose(gd.triple_map(j, k, i), fwd), gd.triple_map(i, k, j)
                )
                rep.add("cocycle", sub, w is None, w)
                w = _maps_equal(
                    compose(gd.coord_map(j, i, k), fwd),
                    compose(gd.transition[(i, j)], gd.coord_map(i, j, k)),
                )
                rep.add("projection-square", sub, w is None, w)
    return rep


@dataclass
class GluingFunctor:
    """Realization of gluing data on the index category.

    ``obj`` maps every normalized object to its space; ``gen`` maps the
    endpoints of every non-identity generator to the continuous map realizing
    it (running from the codomain's space to the domain's space).
    """

    data: GluingData
    obj: dict[GlObject, FiniteSpace]
    gen: dict[tuple[GlObject, GlObject], SpaceMap]

    @property
    def index(self) -> tuple[str, ...]:
        return self.data.index

    def space(self, obj: GlObject) -> FiniteSpace:
        return self.obj[obj]


def _generator_image(gd: GluingData, gen: GlGen) -> SpaceMap:
    if gen.kind == "eta":
        i, j = gen.indices
        return gd.anchor[(i, j)]
    if gen.kind == "tau":
        i, j = gen.indices
        return gd.transition[(i, j)]
    if gen.kind == "eta3":
        i, j, k, n = gen.indices
        obj = normalize((i, j, k))
        if obj.arity != 3:
            return identity_map(gd.space_of(obj))
        return gd.triple_proj[(obj, n)]
    i, j, k = gen.indices
    return gd.triple_map(i, j, k)


def functor_tables(gd: GluingData, report: ValidationReport | None = None) -> GluingFunctor:
    """Realize the data as tables without validating it first."""
    obj_table = {o: gd.space_of(o) for o in glidx.objects(gd.index)}
    gen_table: dict[tuple[GlObject, GlObject], SpaceMap] = {}
    for gen in glidx.raw_generators(gd.index):
        d, c = gen.dom, gen.cod
        if d == c:
            continue
        img = _generator_image(gd, gen)
        prev = gen_table.get((d, c))
        if prev is not None and report is not None and _maps_equal(prev, img) is not None:
            report.add("generator-coherence", gen.display(), False, _maps_equal(prev, img))
        gen_table[(d, c)] = img
    return GluingFunctor(gd, obj_table, gen_table)


def functor_of(gd: GluingData) -> GluingFunctor:
    """Validate the data and realize it as tables over the index category.

    Functoriality amounts to the five relation families of the index category
    becoming equalities of maps; each is re-checked on the realized tables and
    any failure is reported through ``ValidationFailed``.
    """
    report = validate(gd)
    if not report.passed:
        raise ValidationFailed(report)
    fun = functor_tables(gd, report)
    _check_functoriality(fun, report)
    if not report.passed:
        raise ValidationFailed(report)
    return fun


def _image_of(fun: GluingFunctor, m: GlMorphism) -> SpaceMap:
    out = identity_map(fun.obj[m.cod])
    for gen in reversed(m.witness):
        d, c = gen.dom, gen.cod
        if d == c:
            continue
        out = compose(fun.gen[(d, c)], out)
    return out


def _check_functoriality(fun: GluingFunctor, report: ValidationReport) -> None:
    idx = fun.index

    def img(m):
        return _image_of(fun, m)

    for i in idx:
        for j in idx:
            for k in idx:
                sub = f"({i},{j},{k})"
                lhs = img(glidx.compose_hom(glidx._tau3(i, j, k), glidx._tau3(j, k, i)))
                rhs = img(glidx._tau3(i, k, j))
                w = _maps_equal(lhs, rhs)
                rep_ok = w is None
                if not rep_ok:
                    report.add("functor-tau3-cocycle", sub, False, w)
                lhs = img(glidx.compose_hom(glidx._tau3(i, j, k), glidx._tau3(j, i, k)))
                w = _maps_equal(lhs, identity_map(fun.obj[normalize((i, j, k))]))
                if w is not None:
                    report.add("functor-tau3-inverse", sub, False, w)
                lhs = img(glidx.compose_hom(glidx._eta3(i, j, k, j), glidx._eta(i, j)))
                rhs = img(glidx.compose_hom(glidx._eta3(i, j, k, k), glidx._eta(i, k)))
                w = _maps_equal(lhs, rhs)
                if w is not None:
                    report.add("functor-eta3-square", sub, False, w)
                lhs = img(glidx.compose_hom(glidx._tau3(i, j, k), glidx._eta3(j, i, k, i)))
                rhs = img(glidx.compose_hom(glidx._eta3(i, j, k, j), glidx._tau(i, j)))
                w = _maps_equal(lhs, rhs)
                if w is not None:
                    report.add("functor-exchange", sub, False, w)
    for i in idx:
        for j in idx:
            lhs = img(glidx.compose_hom(glidx._tau(i, j), glidx._tau(j, i)))
            w = _maps_equal(lhs, identity_map(fun.obj[glidx.pair(i, j)]))
            if w is not None:
                report.add("functor-tau-inverse", f"({i},{j})", False, w)


def evaluate(fun: GluingFunctor, m: GlMorphism) -> SpaceMap:
    """The continuous map realizing a morphism, computed along its witness path.

    The result is independent of the chosen path; morphisms without a witness
    are resolved through the generator graph first.
    """
    if m.dom == m.cod:
        return identity_map(fun.obj[m.dom])
    path = m
    if not m.witness:
        path = glidx.hom(fun.index, m.dom, m.cod)
        if path is None:
            raise UnknownMorphism(f"no morphism {m.dom} -> {m.cod}")
    for gen in path.witness:
        if (gen.dom, gen.cod) not in fun.gen and gen.dom != gen.cod:
            raise UnknownMorphism(f"generator {gen.display()} outside this functor")
    return _image_of(fun, path)


def extract_data(fun: GluingFunctor) -> GluingData:
    """Read the gluing data back off the functor tables (round trip)."""
    idx = fun.index
    patch = {i: fun.obj[glidx.single(i)] for i in idx}
    overlap = {}
    anchor = {}
    transition = {}
    for i in idx:
        for j in idx:
            overlap[(i, j)] = fun.obj[glidx.pair(i, j)]
            if i == j:
                anchor[(i, j)] = identity_map(patch[i])
                transition[(i, j)] = identity_map(patch[i])
            else:
                anchor[(i, j)] = fun.gen[(glidx.single(i), glidx.pair(i, j))]
                transition[(i, j)] = fun.gen[(glidx.pair(j, i), glidx.pair(i, j))]
    triple_transition = {}
    for i in idx:
        for j in idx:
            for k in idx:
                if i == j:
                    continue
                d = normalize((j, i, k))
                c = normalize((i, j, k))
                if d == c:
                    continue
                triple_transition[(i, j, k)] = fun.gen[(d, c)]
    return make_gluing_data(idx, patch, overlap, anchor, transition, triple_transition)
