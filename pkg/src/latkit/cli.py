"""The ``latkit`` command line.

Every command builds one report dictionary; the human output and the
``--json`` output are two renderings of it. Exit codes: 0 when every check
passes, 1 when a check fails, 2 for usage and parse errors, 3 when a size
cap is hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from . import relcore as rc
from .census import catalog, instance_record, load_catalog, require_kind, write_catalog
from .completion import frame_analysis, rounded_ideal_completion
from .diagnosis import Diagnosis
from .entailment import MAP_KINDS, FinitaryCover, StrongContFinCover, classify_map, from_semilattice, validate_cover
from .errors import (
    KindUnavailable,
    LatkitError,
    NotApproximableMap,
    NotStrong,
    ParseError,
    SizeCapExceeded,
    SortMismatch,
    ValidationError,
)
from .fileformat import COVER_KINDS, FTOP_KINDS, ORDER_KINDS, Document, dumps, load, parse_relation, to_json, validate
from .ftop import ContinuousBasicCover, FormalTopology, cfc_from_cbc, cover_from_cfc, formal_topology_of, validate_continuity
from .proximity import Kind, ProximityJSL, ProximityPoset, strengthen, validate_morphism, validate_structure
from .suites import SUITES, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(LatkitError):
    pass


class Outcome:
    """What a command produced: the report, its human rendering, an
    optional structure to emit, and the exit code."""

    def __init__(self, report: dict, lines: list[str], code: int, emit: Document | None = None):
        self.report, self.lines, self.code, self.emit = report, lines, code, emit


# ---------------------------------------------------------------- helpers

def _code(ok: bool, skipped: int = 0) -> int:
    """A failure outranks a skip; a clean run with skipped checks is a cap hit."""
    if not ok:
        return EXIT_FAIL
    return EXIT_CAP if skipped else EXIT_PASS


def _diag_lines(d: Diagnosis, indent: str = "  ") -> list[str]:
    out = [f"{indent}{d.summary()}"]
    for w in d.witnesses:
        out.append(f"{indent}  {w.axiom}: ({', '.join(w.example)})")
    for s in d.skipped:
        out.append(f"{indent}  skipped: {s}")
    for n in d.notes:
        out.append(f"{indent}  note: {n}")
    return out


def _as_order(doc: Document) -> ProximityPoset | ProximityJSL:
    if doc.kind not in ORDER_KINDS:
        raise UsageError(f"expected a proximity structure, the file holds a {doc.kind}")
    return doc.structure


def _as_jsl(S) -> ProximityJSL:
    if isinstance(S, ProximityJSL):
        return S
    try:
        return ProximityJSL.from_base(S)
    except KindUnavailable as exc:
        raise UsageError(str(exc)) from None


def best_order_kind(S) -> str:
    """The most specific proximity kind the structure passes."""
    try:
        J = _as_jsl(S)
    except UsageError:
        J = None
    if J is not None:
        for k in (Kind.LOCALIZED, Kind.STRONG, Kind.PROXIMITY_JSL):
            if validate_structure(k, J).ok:
                return k.value
        if J.prec == J.le and validate_structure(Kind.JSL, J).ok:
            return Kind.JSL.value
    P = S.poset
    if validate_structure(Kind.PROXIMITY_POSET, P).ok:
        return Kind.PROXIMITY_POSET.value
    return Kind.POSET.value


def _order_doc(S) -> Document:
    kind = best_order_kind(S)
    if Kind(kind).needs_join:
        S = _as_jsl(S)
    else:
        S = S.poset
    return Document(kind, S)


def _retag(doc: Document, kind: str) -> Document:
    """Re-read a parsed structure as another kind of the same family."""
    s = doc.structure
    if kind in ORDER_KINDS:
        if doc.kind not in ORDER_KINDS:
            raise UsageError(f"cannot check a {doc.kind} file as {kind}")
        k = Kind(kind)
        if k.needs_join:
            s = _as_jsl(s)
        return Document(kind, s)
    if kind in COVER_KINDS:
        if doc.kind in ORDER_KINDS:
            s = from_semilattice(_as_jsl(s), strong=True)
        elif doc.kind not in COVER_KINDS:
            raise UsageError(f"cannot check a {doc.kind} file as {kind}")
        if kind in ("strong-cfc", "localized-strong-cfc") and not isinstance(s, StrongContFinCover):
            raise UsageError(f"a {doc.kind} file has no interpolant to check as {kind}")
        if kind == "contfincov" and isinstance(s, StrongContFinCover):
            s = s.as_continuous()
        if kind == "fincov" and not isinstance(s, FinitaryCover):
            s = s.cover
        return Document(kind, s)
    if doc.kind not in FTOP_KINDS:
        raise UsageError(f"cannot check a {doc.kind} file as {kind}")
    if kind == "basic-cover":
        return Document(kind, s if doc.kind == "basic-cover" else s.cover)
    if kind == doc.kind:
        return doc
    raise UsageError(f"cannot check a {doc.kind} file as {kind}")


# ---------------------------------------------------------------- commands

def cmd_check(args) -> Outcome:
    doc = load(args.file)
    kind = args.kind or doc.kind
    if kind not in ORDER_KINDS + COVER_KINDS + FTOP_KINDS:
        raise UsageError(f"unknown kind {kind!r}")
    doc = _retag(doc, kind)
    d = validate(doc)
    report = {"kind": kind, "file": args.file, "diagnosis": d.to_dict()}
    lines = [f"check {kind} {args.file}: {d.verdict}"] + _diag_lines(d)
    return Outcome(report, lines, _code(d.ok, len(d.skipped)))


def cmd_complete(args) -> Outcome:
    S = _as_order(load(args.file))
    L = rounded_ideal_completion(S)
    fr = frame_analysis(L, S)
    pts = [L.render(i) for i in range(L.size)]
    order = [[pts[a], pts[b]] for a, b in L.order.pairs() if a != b]
    wb = [[pts[a], pts[b]] for a, b in L.waybelow.pairs()]
    report = {"file": args.file, "points": pts, "order": order, "waybelow": wb, "frame": fr.to_dict()}
    lines = [f"rounded ideals of {args.file}: {L.size} points"]
    lines += [f"  {p}" for p in pts]
    lines.append(f"  finite meets: {fr.has_finite_meets}, distributive: {fr.is_distributive}, frame: {fr.is_frame}")
    emit = None
    if args.emit:
        car = L.carrier
        emit = _order_doc(ProximityPoset(car, L.order, rc.Relation(car, car, L.waybelow.matrix)))
    return Outcome(report, lines, EXIT_PASS, emit)


def cmd_powerlocale(args) -> Outcome:
    from .powerlocale import LOWER, UPPER, double_object, power, verify_comonad

    S = _as_order(load(args.file))
    if args.which == "double":
        result = double_object(S)
        d = verify_comonad(S, "double")
    else:
        which = LOWER if args.which == "lower" else UPPER
        P = power(S, which)
        result = P.result
        d = verify_comonad(S, which)
    doc = _order_doc(result)
    report = {
        "file": args.file,
        "which": args.which,
        "size": result.n,
        "elements": list(result.carrier.labels),
        "kind": doc.kind,
        "comonad_laws": d.to_dict(),
    }
    lines = [f"{args.which} powerlocale of {args.file}: {_count(result.n, 'element')} ({doc.kind})"]
    lines += [f"  {x}" for x in result.carrier.labels]
    lines.append("  comonad laws:")
    lines += _diag_lines(d, "    ")
    return Outcome(report, lines, _code(d.ok, len(d.skipped)), doc if args.emit else None)


def cmd_strengthen(args) -> Outcome:
    S = _as_order(load(args.file))
    J = _as_jsl(S)
    d0 = validate_structure(Kind.PROXIMITY_JSL, J)
    if not d0.ok:
        report = {"file": args.file, "input": d0.to_dict()}
        return Outcome(report, [f"{args.file} is not a proximity ∨-semilattice"] + _diag_lines(d0), EXIT_FAIL)
    res = strengthen(J)
    d = validate_structure(Kind.STRONG, res.structure)
    inverse = {
        "s∘r = ≺∨": rc.compose(res.s, res.r) == res.structure.prec,
        "r∘s = ≺": rc.compose(res.r, res.s) == J.prec,
    }
    ok = d.ok and all(inverse.values())
    report = {"file": args.file, "size": res.structure.n, "strong": d.to_dict(), "inverse_pair": inverse}
    lines = [f"strengthened {args.file}: {_count(res.structure.n, 'element')}, strong: {d.verdict}"]
    lines += [f"  {k}: {'holds' if v else 'FAILS'}" for k, v in inverse.items()]
    emit = Document(Kind.STRONG.value, res.structure) if args.emit else None
    return Outcome(report, lines, EXIT_PASS if ok else EXIT_FAIL, emit)


def _strong_cover(doc: Document) -> StrongContFinCover:
    if doc.kind in ORDER_KINDS:
        J = _as_jsl(doc.structure)
        if not validate_structure(Kind.STRONG, J).ok:
            raise NotStrong("the structure is not a strong proximity ∨-semilattice")
        return from_semilattice(J, strong=True)
    if not isinstance(doc.structure, StrongContFinCover):
        raise UsageError(f"expected a strong continuous finitary cover, the file holds a {doc.kind}")
    return doc.structure


def cmd_to_ftop(args) -> Outcome:
    c = _strong_cover(load(args.file))
    d = validate_cover("strong-cfc", c)
    if not d.ok:
        return Outcome({"file": args.file, "input": d.to_dict()}, ["input is not a strong cover"] + _diag_lines(d), EXIT_FAIL)
    localized = validate_cover("localized-strong-cfc", c).ok
    if localized:
        ft, fd = formal_topology_of(c)
        out_doc = Document("formal-topology", ft)
        result = fd
    else:
        cb = cover_from_cfc(c)
        out_doc = Document("continuous-basic-cover", cb)
        result = validate_continuity(cb.cover, cb.wb).merge(
            Diagnosis(notes=("not localized: the result is a continuous basic cover, not a formal topology",))
        )
    sat = out_doc.structure.cover.saturated
    report = {
        "file": args.file,
        "localized": localized,
        "kind": out_doc.kind,
        "saturated": [c.carrier.render(U) for U in sat],
        "diagnosis": result.to_dict(),
    }
    lines = [f"{args.file} → {out_doc.kind} ({len(sat)} saturated subsets)"]
    lines += _diag_lines(result)
    return Outcome(report, lines, EXIT_PASS if result.ok else EXIT_FAIL, out_doc if args.emit else None)


def cmd_from_ftop(args) -> Outcome:
    doc = load(args.file)
    s = doc.structure
    if isinstance(s, FormalTopology):
        raise UsageError("from-ftop needs a continuous basic cover (a wb block); formal-topology files carry no wb")
    if not isinstance(s, ContinuousBasicCover):
        raise UsageError(f"expected a continuous basic cover, the file holds a {doc.kind}")
    iso = cfc_from_cbc(s)
    out = Document("strong-cfc", iso.cfc)
    report = {"file": args.file, "size": iso.cfc.n, "isomorphism": iso.diagnosis.to_dict()}
    lines = [f"{args.file} → strong cover on {iso.cfc.n} finite subsets"] + _diag_lines(iso.diagnosis)
    return Outcome(report, lines, EXIT_PASS if iso.diagnosis.ok else EXIT_FAIL, out if args.emit else None)


def cmd_classify_map(args) -> Outcome:
    src, dst = load(args.source), load(args.target)
    text = args.map if args.map is not None else Path(args.map_file).read_text(encoding="utf-8")
    verdicts: dict[str, dict] = {}
    if src.kind in ORDER_KINDS and dst.kind in ORDER_KINDS:
        S, T = src.structure, dst.structure
        r = parse_relation(text, S.carrier, T.carrier)
        if not isinstance(r, rc.Relation):
            raise UsageError("maps between proximity structures are plain relations a->b")
        for kind in ("approximable", "join-approximable", "lawson", "proximity"):
            try:
                d = validate_morphism(kind, r, S, T)
            except (KindUnavailable, NotStrong) as exc:
                verdicts[kind] = {"verdict": "n/a", "reason": str(exc)}
                continue
            verdicts[kind] = d.to_dict()
    else:
        cs, ct = _strong_cover(src), _strong_cover(dst)
        r = parse_relation(text, cs.carrier, ct.carrier)
        if isinstance(r, rc.Relation):
            raise UsageError("maps between covers are generators a->{b,c}")
        for kind in MAP_KINDS:
            try:
                verdicts[kind] = classify_map(kind, r, cs, ct).to_dict()
            except NotApproximableMap as exc:
                verdicts[kind] = {"verdict": "fail", "reason": str(exc)}
    approximable = verdicts["approximable"].get("verdict") == "pass"
    report = {"source": args.source, "target": args.target, "classes": verdicts}
    lines = [f"map {args.source} → {args.target}"]
    for kind, v in verdicts.items():
        extra = ""
        if v.get("witnesses"):
            w = v["witnesses"][0]
            extra = f"  [{w['axiom']}: ({', '.join(w['example'])})]"
        elif v.get("reason"):
            extra = f"  [{v['reason']}]"
        lines.append(f"  {kind}: {v['verdict']}{extra}")
    return Outcome(report, lines, EXIT_PASS if approximable else EXIT_FAIL)


def cmd_suite(args) -> Outcome:
    pool = load_catalog(args.catalog) if args.catalog else None
    reports = run_suite(args.name, args.max_size, args.seed, args.workers, pool)
    ok = all(r.ok for r in reports)
    report = {"suites": [r.to_dict(timing=args.timing) for r in reports], "verdict": "pass" if ok else "fail"}
    lines = []
    for r in reports:
        lines += r.lines()
        if args.timing and r.elapsed is not None:
            lines.append(f"  elapsed {r.elapsed:.2f}s")
    return Outcome(report, lines, _code(ok, sum(r.skipped for r in reports)))


FILTERS = ("strong", "localized", "frame", "upper_coalgebra")


def cmd_enumerate(args) -> Outcome:
    kind = require_kind(args.kind)
    if args.max_size is None:
        raise UsageError("enumerate needs --max-size")
    insts = catalog(kind, args.max_size, args.min_size, flags=True)
    for f in args.filter or ():
        insts = [i for i in insts if i.flags.get(f)]
    if args.catalog:
        write_catalog(insts, args.catalog)
    counts: dict[int, int] = {}
    for i in insts:
        counts[i.size] = counts.get(i.size, 0) + 1
    report = {
        "kind": kind.value,
        "max_size": args.max_size,
        "filters": list(args.filter or ()),
        "counts": {str(k): v for k, v in sorted(counts.items())},
        "instances": [instance_record(i) for i in insts],
    }
    lines = [f"{kind.value} up to size {args.max_size}: {len(insts)} classes"]
    lines += [f"  size {k}: {v}" for k, v in sorted(counts.items())]
    if args.verbose:
        for i in insts:
            flags = ",".join(k for k, v in i.flags.items() if v)
            text = dumps(i.structure, kind.value).splitlines()[2:]
            lines.append(f"  #{i.index} [{flags}] " + " | ".join(text))
    if args.catalog:
        lines.append(f"  catalog written to {args.catalog}")
    return Outcome(report, lines, EXIT_PASS)


# ---------------------------------------------------------------- driver

def _cap_default() -> int | None:
    raw = os.environ.get("LATKIT_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LATKIT_CAP must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None, help="fin-carrier size cap (default 4096, or LATKIT_CAP)")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--emit", action="store_true", help="print the constructed structure as a structure file")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in reports")

    p = argparse.ArgumentParser(prog="latkit", description="Finite proximity structures, powerlocales and covers.")
    p.add_argument("--version", action="version", version=f"latkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="validate a structure file")
    c.add_argument("file")
    c.add_argument("--kind", help="validate as this kind instead of the file's own")
    c.set_defaults(run=cmd_check)

    c = sub.add_parser("complete", parents=[common], help="rounded ideal completion and frame analysis")
    c.add_argument("file")
    c.set_defaults(run=cmd_complete)

    c = sub.add_parser("powerlocale", parents=[common], help="lower, upper or double powerlocale")
    c.add_argument("which", choices=("lower", "upper", "double"))
    c.add_argument("file")
    c.set_defaults(run=cmd_powerlocale)

    c = sub.add_parser("strengthen", parents=[common], help="isomorphic strong structure on finite subsets")
    c.add_argument("file")
    c.set_defaults(run=cmd_strengthen)

    c = sub.add_parser("to-ftop", parents=[common], help="strong cover to continuous basic cover / formal topology")
    c.add_argument("file")
    c.set_defaults(run=cmd_to_ftop)

    c = sub.add_parser("from-ftop", parents=[common], help="continuous basic cover to strong cover")
    c.add_argument("file")
    c.set_defaults(run=cmd_from_ftop)

    c = sub.add_parser("classify-map", parents=[common], help="classify a relation between two structures")
    c.add_argument("source")
    c.add_argument("target")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--map", help="pairs a->b (or generators a->{b,c} between covers)")
    g.add_argument("--map-file", help="file holding the pairs")
    c.set_defaults(run=cmd_classify_map)

    c = sub.add_parser("suite", parents=[common], help="run a property suite")
    c.add_argument("name", choices=SUITES + ("all",))
    c.add_argument("--max-size", type=int, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--catalog", help="read instances from a catalog written by enumerate")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(run=cmd_suite)

    c = sub.add_parser("enumerate", parents=[common], help="isomorphism classes of small structures")
    c.add_argument("kind", choices=[k.value for k in Kind])
    c.add_argument("--max-size", type=int, default=None)
    c.add_argument("--min-size", type=int, default=1)
    c.add_argument("--filter", action="append", choices=FILTERS)
    c.add_argument("--catalog", help="write the instances as newline-delimited JSON")
    c.add_argument("-v", "--verbose", action="store_true", help="list every instance")
    c.set_defaults(run=cmd_enumerate)
    return p


def _print_outcome(out: Outcome, args, argv: list[str]) -> None:
    if args.json:
        report = {"command": argv, "exit_code": out.code, **out.report}
        if out.emit is not None:
            report["emit"] = to_json(out.emit)
        print(json.dumps(report, indent=2, ensure_ascii=False))
    elif out.emit is not None:
        sys.stdout.write(dumps(out.emit))
    else:
        print("\n".join(out.lines))


def _error(args, argv: list[str], code: int, message: str) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"command": argv, "exit_code": code, "error": message}, indent=2, ensure_ascii=False))
    else:
        print(f"latkit: {message}", file=sys.stderr)
    return code


def _count(n: int, noun: str) -> str:
    return f"{n} {noun}" + ("" if n == 1 else "s")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        cap = args.cap if args.cap is not None else _cap_default()
        with rc.size_cap(cap if cap is not None else rc.DEFAULT_CAP):
            out = args.run(args)
    except SizeCapExceeded as exc:
        return _error(args, argv, EXIT_CAP, f"size cap: {exc}")
    except ValidationError as exc:
        return _error(args, argv, EXIT_FAIL, str(exc))
    except (ParseError, UsageError, SortMismatch, KindUnavailable, NotStrong, OSError) as exc:
        return _error(args, argv, EXIT_USAGE, str(exc))
    if args.timing:
        out.report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    _print_outcome(out, args, argv)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
