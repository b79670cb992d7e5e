"""Command-line interface: batch validation and construction over documents.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error, 3 search
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from . import cover as cover_mod
from . import dot, fintop, gdata, glue as glue_mod, refine as refine_mod
from .errors import (
    HypothesisBFailed,
    IllDefined,
    NotCovering,
    NotEquivalence,
    SearchBudgetExceeded,
    TopoglueError,
    UnknownCommand,
    UnknownTarget,
    ValidationFailed,
)
from .specfile import SpecDocument, parse_spec

COMMANDS = (
    "validate",
    "glue",
    "check-cone",
    "check-glued",
    "mediate",
    "verify-universal",
    "check-otop",
    "check-refinement",
    "compose",
    "cover-check",
    "cover-functor",
    "site-check",
    "render-dot",
)

_INPUT_ERRORS = (
    "ParseError",
    "UnresolvedReference",
    "DuplicateName",
    "UnknownCommand",
    "UnknownTarget",
    "UnknownPoint",
    "MissingLeg",
    "MissingComponent",
    "BadArity",
    "InvalidTopology",
    "CompositionMismatch",
    "NotDetermined",
)


@dataclass
class RunReport:
    command: str
    target: str
    ok: bool
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    bare: bool = False  # suppress the status line (pipeable output)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def human(self) -> str:
        if self.bare:
            return "\n".join(self.lines)
        status = "PASS" if self.ok else "FAIL"
        return "\n".join([f"{status} {self.command} {self.target}".rstrip()] + self.lines)

    def machine(self) -> str:
        payload = {
            "command": self.command,
            "target": self.target,
            "ok": self.ok,
            "data": self.data,
        }
        return json.dumps(payload, sort_keys=True)


def _entries_to_lines(entries) -> list[str]:
    return [str(e) for e in entries]


def _entries_to_data(entries):
    return [
        {"name": e.name, "subject": e.subject, "ok": e.ok, "witness": e.witness}
        for e in entries
    ]


def _gluing(doc: SpecDocument, name: str) -> gdata.GluingData:
    if name not in doc.gluings:
        raise UnknownTarget(f"no gluing named {name!r}")
    return doc.gluings[name]


def _cone(doc: SpecDocument, name: str):
    if name not in doc.cones:
        raise UnknownTarget(f"no cone named {name!r}")
    return doc.cones[name]


def _covering(doc: SpecDocument, name: str):
    if name not in doc.coverings:
        raise UnknownTarget(f"no covering named {name!r}")
    return doc.coverings[name].covering


def _cmd_validate(doc, targets, opts):
    names = targets or sorted(doc.gluings)
    lines = []
    data = {}
    ok = True
    for name in names:
        rep = gdata.validate(_gluing(doc, name))
        ok = ok and rep.passed
        lines.append(f"gluing {name}: {'pass' if rep.passed else 'FAIL'}")
        lines += ["  " + str(e) for e in rep.failures()]
        data[name] = _entries_to_data(rep.entries)
    return RunReport("validate", " ".join(names), ok, lines, data)


def _cmd_glue(doc, targets, opts):
    name = _one_target("glue", targets)
    glued = glue_mod.glue(_gluing(doc, name))
    classes = {q: sorted(glued.classes[q]) for q in sorted(glued.classes)}
    lines = [f"glued space has {len(glued.space.points)} classes"]
    for q in sorted(classes):
        lines.append(f"  {q} = {{{', '.join(classes[q])}}}")
    legs = {}
    for obj in sorted(glued.legs, key=repr):
        legs[repr(obj)] = dict(sorted(glued.legs[obj].table.items()))
        lines.append(f"  leg {obj!r}: " + ", ".join(
            f"{k}->{v}" for k, v in sorted(glued.legs[obj].table.items())
        ))
    data = {
        "classes": classes,
        "legs": legs,
        "min_open": {q: sorted(glued.space.min_open[q]) for q in sorted(glued.space.points)},
    }
    return RunReport("glue", name, True, lines, data)


def _cmd_check_cone(doc, targets, opts):
    name = _one_target("check-cone", targets)
    decl = _cone(doc, name)
    gd = _gluing(doc, decl.over)
    modes = [opts.mode] if opts.mode else list(glue_mod.CONE_MODES)
    verdicts = {m: glue_mod.check_cone(gd, decl.cone, m) for m in modes}
    ok = all(verdicts.values())
    lines = [f"mode {m}: {'cone' if v else 'not a cone'}" for m, v in verdicts.items()]
    return RunReport("check-cone", name, ok, lines, {"verdicts": verdicts})


def _cmd_check_glued(doc, targets, opts):
    name = _one_target("check-glued", targets)
    decl = _cone(doc, name)
    gd = _gluing(doc, decl.over)
    candidate = glue_mod.as_candidate(gd, decl.cone.apex, decl.cone.legs)
    rep = glue_mod.check_glued_properties(gd, candidate)
    return RunReport(
        "check-glued", name, rep.passed,
        _entries_to_lines(rep.entries), {"entries": _entries_to_data(rep.entries)},
    )


def _cmd_mediate(doc, targets, opts):
    if len(targets) != 2:
        raise UnknownTarget("mediate needs a gluing name and a cone name")
    gd = _gluing(doc, targets[0])
    decl = _cone(doc, targets[1])
    glued = glue_mod.glue(gd)
    mu = glue_mod.mediate(gd, glued, decl.cone)
    lines = [f"{k} -> {v}" for k, v in sorted(mu.table.items())]
    return RunReport(
        "mediate", " ".join(targets), True, lines, {"table": dict(sorted(mu.table.items()))}
    )


def _cmd_verify_universal(doc, targets, opts):
    name = _one_target("verify-universal", targets)
    gd = _gluing(doc, name)
    glued = glue_mod.glue(gd)
    rep = glue_mod.verify_universal(gd, glued, budget=opts.budget)
    lines = [f"{rep.cones_checked} cones checked"] + _entries_to_lines(rep.entries)
    return RunReport(
        "verify-universal", name, rep.passed, lines,
        {"cones": rep.cones_checked, "entries": _entries_to_data(rep.entries)},
    )


def _cmd_check_otop(doc, targets, opts):
    name = _one_target("check-otop", targets)
    gd = _gluing(doc, name)
    glued = glue_mod.glue(gd)
    rep = glue_mod.check_otop(gd, glued)
    head = "applicable" if rep.applicable else "not applicable"
    return RunReport(
        "check-otop", name, rep.passed,
        [head] + _entries_to_lines(rep.entries),
        {"applicable": rep.applicable, "entries": _entries_to_data(rep.entries)},
    )


def _cmd_check_refinement(doc, targets, opts):
    name = _one_target("check-refinement", targets)
    if name not in doc.refinements:
        raise UnknownTarget(f"no refinement named {name!r}")
    rep = refine_mod.check_refinement(doc.refinements[name])
    return RunReport(
        "check-refinement", name, rep.passed,
        _entries_to_lines(rep.entries), {"entries": _entries_to_data(rep.entries)},
    )


def _cmd_compose(doc, targets, opts):
    name = _one_target("compose", targets)
    if name not in doc.metas:
        raise UnknownTarget(f"no meta gluing named {name!r}")
    fun, rep = refine_mod.compose_gdf(doc.metas[name])
    glued = glue_mod.glue(fun.data)
    lines = _entries_to_lines(rep.entries)
    lines.append(f"composed glued space has {len(glued.space.points)} points")
    data = {
        "entries": _entries_to_data(rep.entries),
        "glued_points": sorted(glued.space.points),
    }
    return RunReport("compose", name, rep.passed, lines, data)


def _cmd_cover_check(doc, targets, opts):
    name = _one_target("cover-check", targets)
    c = _covering(doc, name)
    if opts.kind:
        c = cover_mod.Covering(c.base, c.family, opts.kind)
    rep = cover_mod.check_covering(c)
    return RunReport(
        "cover-check", name, rep.passed,
        _entries_to_lines(rep.entries), {"entries": _entries_to_data(rep.entries)},
    )


def _cmd_cover_functor(doc, targets, opts):
    name = _one_target("cover-functor", targets)
    c = _covering(doc, name)
    result = cover_mod.functor_of_covering(c)
    lines = _entries_to_lines(result.report.entries)
    lines.append(f"glued space has {len(result.glued.space.points)} points")
    return RunReport(
        "cover-functor", name, result.report.passed, lines,
        {"entries": _entries_to_data(result.report.entries)},
    )


def _cmd_site_check(doc, targets, opts):
    rng = random.Random(opts.seed)
    rounds = opts.count
    kinds = [opts.kind] if opts.kind else ["gluing", "open"]
    failures = []
    checked = 0
    for n in range(rounds):
        for kind in kinds:
            base = cover_mod.random_space(rng, max_points=8, space_id=f"base{n}")
            c = cover_mod.random_covering(rng, base, kind)
            if not cover_mod.check_covering(c).passed:
                failures.append(f"round {n}: generated covering invalid ({kind})")
                continue
            checked += 1
            ident = fintop.identity_map(base)
            if not cover_mod.site_axiom_iso(ident):
                failures.append(f"round {n}: iso axiom failed ({kind})")
            subs = [
                cover_mod.random_covering(rng, patch, kind) for patch, _ in c.family
            ]
            _, ok = cover_mod.site_axiom_compose(c, subs)
            if not ok:
                failures.append(f"round {n}: composition axiom failed ({kind})")
            v = cover_mod.random_space(rng, max_points=5, space_id=f"v{n}")
            maps = fintop.enumerate_continuous_maps(v, base, opts.budget)
            phi = rng.choice(maps) if maps else None
            if phi is not None:
                pulled, ok = cover_mod.site_axiom_basechange(c, phi)
                if not ok:
                    failures.append(f"round {n}: base-change axiom failed ({kind})")
                if pulled.kind != c.kind:
                    failures.append(f"round {n}: base-change changed the kind")
    ok = not failures
    lines = [f"{checked} random coverings checked"] + failures
    return RunReport("site-check", f"seed={opts.seed}", ok, lines, {"checked": checked, "failures": failures})


def _cmd_render_dot(doc, targets, opts):
    name = _one_target("render-dot", targets)
    if name.startswith("index:"):
        labels = tuple(sorted(set(name[len("index:"):].split(","))))
        text = dot.render_index(labels)
    elif name in doc.gluings:
        gd = doc.gluings[name]
        glued = glue_mod.glue(gd)
        text = dot.render_gluing(name, gd, glued)
    elif name in doc.metas:
        text = dot.render_meta(name, doc.metas[name])
    else:
        raise UnknownTarget(f"{name!r} is not an index set, gluing, or meta gluing")
    return RunReport("render-dot", name, True, [text.rstrip("\n")], {"dot": text}, bare=True)


def _one_target(command: str, targets) -> str:
    if len(targets) != 1:
        raise UnknownTarget(f"{command} needs exactly one target name")
    return targets[0]


_DISPATCH = {
    "validate": _cmd_validate,
    "glue": _cmd_glue,
    "check-cone": _cmd_check_cone,
    "check-glued": _cmd_check_glued,
    "mediate": _cmd_mediate,
    "verify-universal": _cmd_verify_universal,
    "check-otop": _cmd_check_otop,
    "check-refinement": _cmd_check_refinement,
    "compose": _cmd_compose,
    "cover-check": _cmd_cover_check,
    "cover-functor": _cmd_cover_functor,
    "site-check": _cmd_site_check,
    "render-dot": _cmd_render_dot,
}


def run(doc: SpecDocument, command: str, targets=(), opts=None) -> RunReport:
    """Execute one command against a parsed document."""
    if command not in _DISPATCH:
        raise UnknownCommand(f"unknown command {command!r}")
    if opts is None:
        opts = _default_opts()
    return _DISPATCH[command](doc, list(targets), opts)


def render_dot(doc: SpecDocument, target: str) -> str:
    """The DOT text for an index set (``index:i,j,k``), gluing, or meta gluing."""
    return _cmd_render_dot(doc, [target], _default_opts()).data["dot"]


def _default_opts():
    return argparse.Namespace(
        budget=fintop.DEFAULT_MAP_BUDGET, mode=None, kind=None, seed=0, count=25,
        machine=False, derive_triples=False,
    )


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="topoglue",
        description="validate and construct gluings of finite topological spaces",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="declaration document")
    p.add_argument("targets", nargs="*", help="declared names the command acts on")
    p.add_argument("--budget", type=int, default=fintop.DEFAULT_MAP_BUDGET,
                   help="search budget for enumeration oracles")
    p.add_argument("--derive-triples", action="store_true",
                   help="fill missing triple transitions when uniquely forced")
    p.add_argument("--mode", choices=glue_mod.CONE_MODES, default=None,
                   help="cone check mode (default: all three)")
    p.add_argument("--kind", choices=cover_mod.KINDS, default=None,
                   help="covering kind override")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized batches")
    p.add_argument("--count", type=int, default=25, help="rounds for randomized batches")
    p.add_argument("--machine", action="store_true", help="emit a JSON report")
    return p


def main(argv=None) -> int:
    opts = _build_parser().parse_args(argv)
    try:
        with open(opts.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        doc = parse_spec(text, derive_triples=opts.derive_triples)
        report = run(doc, opts.command, opts.targets, opts)
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationFailed, NotEquivalence, IllDefined, NotCovering, HypothesisBFailed) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except TopoglueError as exc:
        code = 2 if type(exc).__name__ in _INPUT_ERRORS else 1
        print(f"error: {exc}", file=sys.stderr)
        return code
    print(report.machine() if opts.machine else report.human())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
