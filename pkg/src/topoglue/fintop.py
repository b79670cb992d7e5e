"""Finite topological spaces and their maps.

A finite topology is stored as a minimal-open table: for every point x,
``min_open[x]`` is the smallest open set containing x.  This determines the
whole open-set lattice (a set is open iff it contains the minimal open of each
of its points), so continuity, openness and embeddings reduce to per-point
checks.  Points are plain strings scoped to their space; nothing identifies
points across spaces except explicit maps.

All values are immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    CompositionMismatch,
    InvalidTopology,
    SearchBudgetExceeded,
    UnknownPoint,
)

DEFAULT_MAP_BUDGET = 10**6
DEFAULT_HOMEO_BUDGET = 200_000


@dataclass(frozen=True)
class FiniteSpace:
    """A finite topological space given by its minimal-open table.

    ``space_id`` is a label for diagnostics only; it does not take part in
    equality.  Two spaces are equal iff they have the same points and the
    same minimal-open table.
    """

    space_id: str = field(compare=False)
    points: frozenset[str]
    min_open: Mapping[str, frozenset[str]]

    def __repr__(self):
        return f"FiniteSpace({self.space_id!r}, {len(self.points)} points)"

    def require(self, point: str) -> None:
        if point not in self.points:
            raise UnknownPoint(f"{point!r} is not a point of {self.space_id!r}")


@dataclass(frozen=True)
class SpaceMap:
    """A point-to-point table between two finite spaces (not necessarily continuous)."""

    dom: FiniteSpace
    cod: FiniteSpace
    table: Mapping[str, str]

    def __call__(self, point: str) -> str:
        if point not in self.table:
            raise UnknownPoint(f"{point!r} is not a point of {self.dom.space_id!r}")
        return self.table[point]

    def image(self, subset: Iterable[str] | None = None) -> frozenset[str]:
        if subset is None:
            subset = self.dom.points
        return frozenset(self(x) for x in subset)

    def __repr__(self):
        return f"SpaceMap({self.dom.space_id!r} -> {self.cod.space_id!r})"


@dataclass(frozen=True)
class MapReport:
    """Per-property analysis of a map, with witnesses for every failure."""

    continuous: bool
    injective: bool
    open_map: bool
    embedding: bool
    witnesses: tuple[tuple[str, str], ...]

    @property
    def homeomorphism(self) -> bool:
        return self.embedding and self.open_map and self.surjective

    # surjectivity is recorded as the absence of a "surjective" witness
    @property
    def surjective(self) -> bool:
        return not any(prop == "surjective" for prop, _ in self.witnesses)


def make_space(space_id: str, points: Iterable[str], min_open: Mapping[str, Iterable[str]]) -> FiniteSpace:
    """Build a validated finite space from a minimal-open table."""
    pts = frozenset(points)
    table = {}
    for x in pts:
        if x not in min_open:
            raise InvalidTopology(x, None, f"no minimal open given for {x!r}")
        u = frozenset(min_open[x])
        if not u <= pts:
            raise InvalidTopology(x, u - pts, f"min_open({x!r}) leaves the point set")
        table[x] = u
    extra = set(min_open) - pts
    if extra:
        raise InvalidTopology(sorted(extra)[0], None, "table mentions unknown points")
    for x in pts:
        if x not in table[x]:
            raise InvalidTopology(x, x, f"{x!r} not in its own minimal open")
        for y in table[x]:
            if not table[y] <= table[x]:
                raise InvalidTopology(x, y, f"min_open({y!r}) not inside min_open({x!r})")
    return FiniteSpace(space_id, pts, table)


def from_opens(space_id: str, points: Iterable[str], opens: Iterable[Iterable[str]]) -> FiniteSpace:
    """Build the space whose topology is generated by ``opens``.

    The minimal open of x is the intersection of the generating sets that
    contain x (and the whole set); closing under union/intersection does not
    change these intersections, so the closure is never materialized.
    """
    pts = frozenset(points)
    gens = [frozenset(o) & pts for o in opens]
    table = {}
    for x in pts:
        u = pts
        for g in gens:
            if x in g:
                u = u & g
        table[x] = u
    return make_space(space_id, pts, table)


def is_open(space: FiniteSpace, subset: Iterable[str]) -> bool:
    """A set is open iff it contains the minimal open of each of its points."""
    sub = frozenset(subset)
    for x in sub:
        space.require(x)
    return all(space.min_open[x] <= sub for x in sub)


def make_map(dom: FiniteSpace, cod: FiniteSpace, table: Mapping[str, str]) -> SpaceMap:
    """Build a validated total map (every domain point mapped into the codomain)."""
    tbl = dict(table)
    if set(tbl) != set(dom.points):
        missing = dom.points - set(tbl)
        extra = set(tbl) - dom.points
        bad = sorted(missing or extra)[0]
        raise UnknownPoint(f"table does not match domain {dom.space_id!r} at {bad!r}")
    for x, y in tbl.items():
        if y not in cod.points:
            raise UnknownPoint(f"{y!r} is not a point of codomain {cod.space_id!r}")
    return SpaceMap(dom, cod, tbl)


def identity_map(space: FiniteSpace) -> SpaceMap:
    return SpaceMap(space, space, {x: x for x in space.points})


def compose(g: SpaceMap, f: SpaceMap) -> SpaceMap:
    """Pointwise composition g after f."""
    if f.cod != g.dom:
        raise CompositionMismatch(
            f"cannot compose {g!r} after {f!r}: middle spaces differ"
        )
    return SpaceMap(f.dom, g.cod, {x: g(f(x)) for x in f.dom.points})


def analyze_map(f: SpaceMap) -> MapReport:
    """Check continuity, injectivity, openness and the embedding criterion.

    continuous: f(min_open(x)) is inside min_open(f(x)) for every x.
    open:       the image of every minimal open is open.
    embedding:  injective, continuous, and the image of each minimal open is
                exactly min_open(f(x)) intersected with the image of f.
    """
    witnesses: list[tuple[str, str]] = []
    continuous = True
    for x in sorted(f.dom.points):
        img = f.image(f.dom.min_open[x])
        if not img <= f.cod.min_open[f(x)]:
            continuous = False
            witnesses.append(("continuous", x))
    injective = True
    seen: dict[str, str] = {}
    for x in sorted(f.dom.points):
        y = f(x)
        if y in seen:
            injective = False
            witnesses.append(("injective", f"{seen[y]},{x}"))
        else:
            seen[y] = x
    open_map = True
    for x in sorted(f.dom.points):
        if not is_open(f.cod, f.image(f.dom.min_open[x])):
            open_map = False
            witnesses.append(("open", x))
    full_image = f.image()
    embedding = injective and continuous
    if embedding:
        for x in sorted(f.dom.points):
            if f.image(f.dom.min_open[x]) != f.cod.min_open[f(x)] & full_image:
                embedding = False
                witnesses.append(("embedding", x))
    if full_image != f.cod.points:
        witnesses.append(("surjective", sorted(f.cod.points - full_image)[0]))
    return MapReport(continuous, injective, open_map, embedding, tuple(witnesses))


def is_homeomorphism(f: SpaceMap) -> bool:
    r = analyze_map(f)
    return r.continuous and r.injective and r.surjective and r.open_map


def coproduct_tag(point: str, tag: str) -> str:
    return f"{point}@{tag}"


def disjoint_union(
    spaces: Sequence[FiniteSpace], tags: Sequence[str] | None = None
) -> tuple[FiniteSpace, list[SpaceMap]]:
    """Disjoint union with tagged points and the canonical injections."""
    if tags is None:
        tags = [str(i) for i in range(len(spaces))]
    if len(tags) != len(spaces) or len(set(tags)) != len(tags):
        raise ValueError("tags must be distinct and match the space list")
    points = []
    table = {}
    for sp, tag in zip(spaces, tags):
        for x in sp.points:
            points.append(coproduct_tag(x, tag))
            table[coproduct_tag(x, tag)] = frozenset(
                coproduct_tag(y, tag) for y in sp.min_open[x]
            )
    union_id = "+".join(s.space_id for s in spaces) or "empty"
    total = make_space(union_id, points, table)
    injections = [
        SpaceMap(sp, total, {x: coproduct_tag(x, tag) for x in sp.points})
        for sp, tag in zip(spaces, tags)
    ]
    return total, injections


def subspace(space: FiniteSpace, subset: Iterable[str]) -> tuple[FiniteSpace, SpaceMap]:
    """Subspace topology: minimal opens are intersected with the subset."""
    sub = frozenset(subset)
    for x in sub:
        space.require(x)
    table = {x: space.min_open[x] & sub for x in sub}
    sp = make_space(f"{space.space_id}|sub", sub, table)
    return sp, SpaceMap(sp, space, {x: x for x in sub})


def pair_tag(u: str, v: str) -> str:
    """Deterministic tag for a pullback/product point."""
    return f"({u},{v})"


def pullback(f: SpaceMap, g: SpaceMap) -> tuple[FiniteSpace, SpaceMap, SpaceMap]:
    """Pullback of a cospan: pairs with equal images, product topology restricted."""
    if f.cod != g.cod:
        raise CompositionMismatch("pullback needs maps into a common codomain")
    pairs = [
        (u, v)
        for u in sorted(f.dom.points)
        for v in sorted(g.dom.points)
        if f(u) == g(v)
    ]
    pair_set = {pair_tag(u, v) for u, v in pairs}
    table = {}
    for u, v in pairs:
        cell = {
            pair_tag(a, b)
            for a in f.dom.min_open[u]
            for b in g.dom.min_open[v]
        }
        table[pair_tag(u, v)] = frozenset(cell) & frozenset(pair_set)
    sp = make_space(f"{f.dom.space_id}*{g.dom.space_id}", pair_set, table)
    proj_f = SpaceMap(sp, f.dom, {pair_tag(u, v): u for u, v in pairs})
    proj_g = SpaceMap(sp, g.dom, {pair_tag(u, v): v for u, v in pairs})
    return sp, proj_f, proj_g


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def quotient(
    space: FiniteSpace, pairs: Iterable[tuple[str, str]]
) -> tuple[FiniteSpace, SpaceMap]:
    """Quotient by the pair graph, carrying the final topology.

    Classes are named by their lexicographically least member.  The minimal
    open of a class is the least saturated open hull of its members: grow by
    minimal opens, saturate under the equivalence, repeat to a fixpoint, then
    push forward to classes.
    """
    uf = _UnionFind(space.points)
    for x, y in pairs:
        space.require(x)
        space.require(y)
        uf.union(x, y)
    rep = {x: uf.find(x) for x in space.points}
    members: dict[str, set[str]] = {}
    for x, r in rep.items():
        members.setdefault(r, set()).add(x)

    def hull(start: set[str]) -> frozenset[str]:
        cur = set(start)
        while True:
            grown = set()
            for x in cur:
                grown |= space.min_open[x]
            for x in list(grown):
                grown |= members[rep[x]]
            if grown == cur:
                return frozenset(cur)
            cur = grown

    table = {
        r: frozenset(rep[x] for x in hull(mem)) for r, mem in members.items()
    }
    q = make_space(f"{space.space_id}/~", members.keys(), table)
    projection = SpaceMap(space, q, dict(rep))
    return q, projection


def enumerate_continuous_maps(
    a: FiniteSpace, b: FiniteSpace, budget: int = DEFAULT_MAP_BUDGET
) -> list[SpaceMap]:
    """All continuous maps a -> b, in lexicographic table order.

    The candidate count |b| ** |a| must stay within ``budget``.
    """
    dom = sorted(a.points)
    cod = sorted(b.points)
    if not dom:
        return [SpaceMap(a, b, {})]
    candidates = len(cod) ** len(dom)
    if candidates > budget:
        raise SearchBudgetExceeded(
            f"{candidates} candidate maps {a.space_id!r} -> {b.space_id!r} "
            f"exceed budget {budget}"
        )
    out = []
    for images in itertools.product(cod, repeat=len(dom)):
        table = dict(zip(dom, images))
        ok = True
        for x in dom:
            fx = table[x]
            if any(table[y] not in b.min_open[fx] for y in a.min_open[x]):
                ok = False
                break
        if ok:
            out.append(SpaceMap(a, b, table))
    return out


def _signature(space: FiniteSpace) -> dict[str, tuple[int, int]]:
    indeg = {x: 0 for x in space.points}
    for y in space.points:
        for x in space.min_open[y]:
            indeg[x] += 1
    return {x: (len(space.min_open[x]), indeg[x]) for x in space.points}


def find_homeomorphism(
    a: FiniteSpace, b: FiniteSpace, node_budget: int = DEFAULT_HOMEO_BUDGET
) -> SpaceMap | None:
    """Search for a homeomorphism a -> b; returns a witness map or None.

    Backtracking over points sorted by signature rarity; candidates are pruned
    by (minimal-open size, in-degree) signatures and by consistency of the
    specialization relation with all previously assigned points.
    """
    if len(a.points) != len(b.points):
        return None
    sig_a, sig_b = _signature(a), _signature(b)
    by_sig: dict[tuple[int, int], list[str]] = {}
    for y in sorted(b.points):
        by_sig.setdefault(sig_b[y], []).append(y)
    counts_a: dict[tuple[int, int], int] = {}
    for x in a.points:
        counts_a[sig_a[x]] = counts_a.get(sig_a[x], 0) + 1
    if {k: len(v) for k, v in by_sig.items()} != counts_a:
        return None
    order = sorted(a.points, key=lambda x: (len(by_sig[sig_a[x]]), x))
    assignment: dict[str, str] = {}
    used: set[str] = set()
    visited = 0

    def consistent(x: str, y: str) -> bool:
        for x2, y2 in assignment.items():
            if (x2 in a.min_open[x]) != (y2 in b.min_open[y]):
                return False
            if (x in a.min_open[x2]) != (y in b.min_open[y2]):
                return False
        return True

    def search(pos: int) -> bool:
        nonlocal visited
        if pos == len(order):
            return True
        x = order[pos]
        for y in by_sig[sig_a[x]]:
            if y in used:
                continue
            visited += 1
            if visited > node_budget:
                raise SearchBudgetExceeded(
                    f"homeomorphism search visited more than {node_budget} nodes"
                )
            if consistent(x, y):
                assignment[x] = y
                used.add(y)
                if search(pos + 1):
                    return True
                del assignment[x]
                used.remove(y)
        return False

    if search(0):
        return SpaceMap(a, b, dict(assignment))
    return None
