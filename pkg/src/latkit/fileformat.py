"""Reading and writing structure files.

A structure file is a sequence of ``key: entries`` blocks; a line starting
with whitespace continues the previous block and ``#`` starts a comment::

    format: latkit/1
    kind: strong-proximity-jsl
    atoms: o i
    le: o->i

Binary relations list pairs ``a->b``, upper relations list generators
``a->{b,c}``, and a join table lists ``a+b=c``. Labels that are not plain
names go in double quotes. ``docs/format.md`` has the grammar and the
JSON mirror.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import relcore as rc
from .entailment import ContFinCover, FinitaryCover, StrongContFinCover, UpperRelation
from .errors import LatkitError, ParseError, ValidationError
from .ftop import BasicCover, ContinuousBasicCover, FormalTopology
from .proximity import Kind, ProximityJSL, ProximityPoset, lub_table
from .relcore import Carrier, Relation, members

FORMAT = "latkit/1"

ORDER_KINDS = tuple(k.value for k in Kind)
COVER_KINDS = ("fincov", "contfincov", "strong-cfc", "localized-strong-cfc")
FTOP_KINDS = ("basic-cover", "continuous-basic-cover", "formal-topology")
KINDS = ORDER_KINDS + COVER_KINDS + FTOP_KINDS

# block name -> entry shape
SHAPES = {"le": "pair", "prec": "pair", "wb": "pair", "interp": "pair", "cov": "upper", "ll": "upper", "join": "join", "bottom": "atom"}

_ALLOWED = {
    "poset": ("le",),
    "jsl": ("le", "bottom", "join"),
    "proximity-poset": ("le", "prec"),
    "proximity-jsl": ("le", "prec", "bottom", "join"),
    "strong-proximity-jsl": ("le", "prec", "bottom", "join"),
    "localized-strong-proximity-jsl": ("le", "prec", "bottom", "join"),
    "fincov": ("cov",),
    "contfincov": ("cov", "ll"),
    "strong-cfc": ("cov", "interp"),
    "localized-strong-cfc": ("cov", "interp"),
    "basic-cover": ("cov",),
    "continuous-basic-cover": ("cov", "wb"),
    "formal-topology": ("cov", "le", "wb"),
}
_REQUIRED = {"contfincov": ("ll",), "strong-cfc": ("interp",), "localized-strong-cfc": ("interp",), "continuous-basic-cover": ("wb",)}
_ORDER = ("format", "kind", "atoms", "le", "prec", "bottom", "join", "cov", "ll", "interp", "wb")


@dataclass(frozen=True, eq=False)
class Document:
    kind: str
    structure: object

    def __eq__(self, other) -> bool:
        return isinstance(other, Document) and dumps(self) == dumps(other)

    def __hash__(self) -> int:
        return hash(dumps(self))


# ---------------------------------------------------------------- lexing

_TOKEN = re.compile(r'\s*(?:(?P<q>"(?:[^"\\]|\\.)*")|(?P<name>[A-Za-z0-9_\'.]+)|(?P<arrow>->)|(?P<p>[{},+=]))')
_WORD_KEYS = ("format", "kind")
_HEADER = re.compile(r"(?P<key>[A-Za-z][A-Za-z0-9_-]*)\s*:(?P<rest>.*)$")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"' and (i == 0 or line[i - 1] != "\\"):
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def _lex(text: str, line: int, col: int) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", line, col + pos + skip)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if kind == "q":
            value = json.loads(value)
            kind = "name"
        out.append(_Tok(kind if kind != "p" else value, value, line, col + start))
        pos = m.end()
    return out


def _blocks(text: str) -> list[tuple[str, int, list[_Tok]]]:
    blocks: list[tuple[str, int, list[_Tok]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line[0].isspace():
            if not blocks:
                raise ParseError("continuation line before any block", lineno, 1)
            if blocks[-1][0] in _WORD_KEYS:
                raise ParseError(f"{blocks[-1][0]} does not continue", lineno, 1)
            blocks[-1][2].extend(_lex(line, lineno, 1))
            continue
        m = _HEADER.match(line)
        if not m:
            raise ParseError("expected 'key: entries'", lineno, 1)
        key = m.group("key")
        if any(k == key for k, _, _ in blocks):
            raise ParseError(f"duplicate block {key!r}", lineno, 1)
        rest, col = m.group("rest"), m.start("rest") + 1
        if key in _WORD_KEYS:
            word = rest.strip()
            if not word or len(word.split()) > 1:
                raise ParseError(f"{key}: expected a single word", lineno, col)
            blocks.append((key, lineno, [_Tok("name", word, lineno, col + rest.index(word))]))
        else:
            blocks.append((key, lineno, _lex(rest, lineno, col)))
    return blocks


class _Stream:
    def __init__(self, toks: list[_Tok], key: str, line: int):
        self.toks, self.i, self.key, self.line = toks, 0, key, line

    def more(self) -> bool:
        return self.i < len(self.toks)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.more() else None

    def take(self, kind: str) -> _Tok:
        t = self.peek()
        if t is None:
            raise ParseError(f"{self.key}: entry ends early, expected {kind}", self.line, 0)
        if t.kind != kind:
            raise ParseError(f"{self.key}: expected {kind}, found {t.text!r}", t.line, t.col)
        self.i += 1
        return t


def _parse_set(st: _Stream) -> list[_Tok]:
    st.take("{")
    out = []
    if st.peek() is not None and st.peek().kind == "}":
        st.take("}")
        return out
    out.append(st.take("name"))
    while st.peek() is not None and st.peek().kind == ",":
        st.take(",")
        out.append(st.take("name"))
    st.take("}")
    return out


def _entries(key: str, line: int, toks: list[_Tok]) -> list[tuple]:
    shape = SHAPES.get(key, "names")
    st = _Stream(toks, key, line)
    out = []
    while st.more():
        if shape == "names":
            out.append(st.take("name"))
        elif shape == "atom":
            out.append(st.take("name"))
            if st.more():
                t = st.peek()
                raise ParseError(f"{key}: takes a single element", t.line, t.col)
        elif shape == "pair":
            a = st.take("name")
            st.take("arrow")
            out.append((a, st.take("name")))
        elif shape == "upper":
            a = st.take("name")
            st.take("arrow")
            out.append((a, _parse_set(st)))
        else:
            a = st.take("name")
            st.take("+")
            b = st.take("name")
            st.take("=")
            out.append((a, b, st.take("name")))
    return out


# ---------------------------------------------------------------- building

def _index(car: Carrier, tok: _Tok) -> int:
    try:
        return car.index(tok.text)
    except KeyError:
        raise ParseError(f"unknown element {tok.text!r}", tok.line, tok.col) from None


def _pairs_matrix(car: Carrier, entries) -> np.ndarray:
    m = np.zeros((len(car), len(car)), dtype=bool)
    for a, b in entries:
        m[_index(car, a), _index(car, b)] = True
    return m


def _upper(car: Carrier, entries) -> UpperRelation:
    rc.fin_carrier(car)
    m = np.zeros((len(car), 1 << len(car)), dtype=bool)
    for a, B in entries:
        m[_index(car, a), rc.mask_of(_index(car, b) for b in B)] = True
    return UpperRelation(car, car, m)


def _build(kind: str, atoms: list[_Tok], fields: dict[str, tuple[int, list]], kind_line: int) -> Document:
    labels = [t.text for t in atoms]
    seen: dict[str, _Tok] = {}
    for t in atoms:
        if t.text in seen:
            raise ParseError(f"duplicate atom {t.text!r}", t.line, t.col)
        seen[t.text] = t
    car = Carrier(tuple(labels))
    for key, (line, _) in fields.items():
        if key not in _ALLOWED[kind]:
            raise ParseError(f"block {key!r} is not allowed for kind {kind}", line, 1)
    for key in _REQUIRED.get(kind, ()):
        if key not in fields:
            raise ParseError(f"kind {kind} needs a {key!r} block", kind_line, 1)
    get = lambda key: fields[key][1] if key in fields else []  # noqa: E731

    if kind in ORDER_KINDS:
        k = Kind(kind)
        le = rc.reflexive_transitive_closure(_pairs_matrix(car, get("le")))
        prec = _pairs_matrix(car, get("prec")) if "prec" in fields else None
        base = ProximityPoset.from_matrices(car, le, prec)
        if not k.needs_join:
            return Document(kind, base)
        bottom, join = lub_table(le)
        if "bottom" in fields:
            bottom = _index(car, fields["bottom"][1][0])
        if "join" in fields:
            join = np.full((len(car), len(car)), -1, dtype=np.int64)
            for a, b, c in fields["join"][1]:
                i, j, v = _index(car, a), _index(car, b), _index(car, c)
                join[i, j] = join[j, i] = v
            if (join < 0).any():
                raise ParseError("join table is incomplete", fields["join"][0], 1)
        if bottom is None or join is None:
            what = "least element" if bottom is None else "binary joins"
            raise ParseError(f"the order has no {what}; kind {kind} needs them", kind_line, 1)
        return Document(kind, ProximityJSL(base, bottom, join))

    if kind in COVER_KINDS:
        cover = FinitaryCover(car, _upper(car, get("cov")))
        if kind == "fincov":
            return Document(kind, cover)
        if kind == "contfincov":
            return Document(kind, ContFinCover(cover, _upper(car, get("ll"))))
        return Document(kind, StrongContFinCover(cover, Relation(car, car, _pairs_matrix(car, get("interp")))))

    bc = BasicCover.from_axioms(car, [(_index(car, a), rc.mask_of(_index(car, b) for b in B)) for a, B in get("cov")])
    if kind == "basic-cover":
        return Document(kind, bc)
    if kind == "continuous-basic-cover":
        return Document(kind, ContinuousBasicCover(bc, Relation(car, car, _pairs_matrix(car, get("wb")))))
    le = rc.reflexive_transitive_closure(_pairs_matrix(car, get("le")))
    return Document(kind, FormalTopology(bc, Relation(car, car, le)))


def parse(text: str, validate: bool = False) -> Document:
    """Parse a structure file. With ``validate`` the structure must also pass
    its kind's validator, else ``ValidationError``."""
    blocks = _blocks(text)
    heads = {k: (line, toks) for k, line, toks in blocks}
    for key, line, _ in blocks:
        if key not in _ORDER:
            raise ParseError(f"unknown block {key!r}", line, 1)
    for key in ("format", "kind", "atoms"):
        if key not in heads:
            raise ParseError(f"missing {key!r} block", 1, 1)
    fmt = heads["format"][1][0]
    if fmt.text != FORMAT:
        raise ParseError(f"unsupported format {fmt.text!r}", fmt.line, fmt.col)
    kind_tok = heads["kind"][1][0]
    kind = kind_tok.text
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", kind_tok.line, kind_tok.col)
    atoms = _entries("atoms", *heads["atoms"])
    fields = {k: (line, _entries(k, line, toks)) for k, line, toks in blocks if k not in ("format", "kind", "atoms")}
    doc = _guarded(lambda: _build(kind, atoms, fields, kind_tok.line))
    if validate:
        require_valid(doc)
    return doc


def _guarded(build):
    try:
        return build()
    except ParseError:
        raise
    except (LatkitError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def load(path: str | Path, validate: bool = False) -> Document:
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        return from_json(data, validate)
    return parse(text, validate)


def validate(doc: Document):
    """The kind's own validator applied to the parsed structure."""
    from .entailment import validate_cover
    from .ftop import validate_basic_cover, validate_continuity, validate_formal_topology
    from .proximity import validate_structure

    s = doc.structure
    if doc.kind in ORDER_KINDS:
        return validate_structure(doc.kind, s)
    if doc.kind in COVER_KINDS:
        return validate_cover(doc.kind, s)
    if doc.kind == "basic-cover":
        return validate_basic_cover(s)
    if doc.kind == "continuous-basic-cover":
        return validate_continuity(s.cover, s.wb)
    return validate_formal_topology(s)


def require_valid(doc: Document) -> Document:
    d = validate(doc)
    if not d.ok:
        raise ValidationError(doc.kind, d)
    return doc


# ---------------------------------------------------------------- writing

def kind_of(structure) -> str:
    """The most specific kind tag that needs no validation to be honest."""
    if isinstance(structure, ProximityJSL):
        return "jsl" if structure.prec == structure.le else "proximity-jsl"
    if isinstance(structure, ProximityPoset):
        return "poset" if structure.prec == structure.le else "proximity-poset"
    if isinstance(structure, StrongContFinCover):
        return "strong-cfc"
    if isinstance(structure, ContFinCover):
        return "contfincov"
    if isinstance(structure, FinitaryCover):
        return "fincov"
    if isinstance(structure, FormalTopology):
        return "formal-topology"
    if isinstance(structure, ContinuousBasicCover):
        return "continuous-basic-cover"
    if isinstance(structure, BasicCover):
        return "basic-cover"
    raise TypeError(f"cannot serialize {type(structure).__name__}")


def _as_doc(x, kind: str | None = None) -> Document:
    if isinstance(x, Document):
        return x if kind is None else Document(kind, x.structure)
    return Document(kind or kind_of(x), x)


def _order_pairs(car: Carrier, le: np.ndarray) -> list[list[str]]:
    """Covering pairs of a partial order; all strict pairs of a preorder."""
    strict = le & ~np.eye(len(le), dtype=bool)
    keep = strict
    if rc.is_antisymmetric(le):
        keep = strict & ~rc.bool_product(strict, strict)
    return [[car.labels[a], car.labels[b]] for a, b in np.argwhere(keep).tolist()]


def _all_pairs(car: Carrier, m: np.ndarray) -> list[list[str]]:
    return [[car.labels[a], car.labels[b]] for a, b in np.argwhere(m).tolist()]


def _upper_pairs(r: UpperRelation) -> list[list]:
    out = []
    for i in range(len(r.source)):
        for k in np.flatnonzero(r.matrix[i]).tolist():
            if not any(r.matrix[i, k & ~(1 << b)] for b in members(k)):
                out.append([r.source.labels[i], [r.target_base.labels[b] for b in members(k)]])
    return out


def _basic_axioms(bc: BasicCover) -> list[list]:
    """Pairs (a, U) with a ∈ sat(U) \\ U and U minimal; they regenerate sat."""
    out = []
    n = bc.n
    for a in range(n):
        for U in range(1 << n):
            if (U >> a) & 1 or not bc.covers(a, U):
                continue
            if not any(bc.covers(a, U & ~(1 << b)) for b in members(U)):
                out.append([bc.carrier.labels[a], [bc.carrier.labels[b] for b in members(U)]])
    return out


def to_json(x, kind: str | None = None) -> dict:
    """Canonical JSON form; ``dumps`` writes exactly the same content as text."""
    doc = _as_doc(x, kind)
    s, k = doc.structure, doc.kind
    out: dict = {"format": FORMAT, "kind": k}
    if k in ORDER_KINDS:
        base = s.poset
        car = base.carrier
        out["atoms"] = list(car.labels)
        out["le"] = _order_pairs(car, base.le.matrix)
        if Kind(k).needs_prec and base.prec != base.le:
            out["prec"] = _all_pairs(car, base.prec.matrix)
        if isinstance(s, ProximityJSL):
            bottom, join = lub_table(base.le.matrix)
            if bottom != s.bottom:
                out["bottom"] = car.labels[s.bottom]
            if join is None or not np.array_equal(join, s.join):
                n = len(car)
                out["join"] = [[car.labels[i], car.labels[j], car.labels[int(s.join[i, j])]] for i in range(n) for j in range(i, n)]
        return out
    if k in COVER_KINDS:
        out["atoms"] = list(s.carrier.labels)
        out["cov"] = _upper_pairs(s.cov)
        if isinstance(s, ContFinCover):
            out["ll"] = _upper_pairs(s.ll)
        if isinstance(s, StrongContFinCover):
            out["interp"] = _all_pairs(s.carrier, s.interp.matrix)
        return out
    out["atoms"] = list(s.carrier.labels)
    bc = s if isinstance(s, BasicCover) else s.cover
    out["cov"] = _basic_axioms(bc)
    if isinstance(s, FormalTopology):
        out["le"] = _all_pairs(s.carrier, s.le.matrix & ~np.eye(bc.n, dtype=bool))
    if isinstance(s, ContinuousBasicCover):
        out["wb"] = _all_pairs(s.carrier, s.wb.matrix)
    return out


_PLAIN = re.compile(r"[A-Za-z0-9_'.]+\Z")


def _label(x: str) -> str:
    return x if _PLAIN.match(x) else json.dumps(x, ensure_ascii=False)


def _entry(key: str, e) -> str:
    shape = SHAPES.get(key, "names")
    if shape == "names" or shape == "atom":
        return _label(e)
    if shape == "pair":
        return f"{_label(e[0])}->{_label(e[1])}"
    if shape == "upper":
        return f"{_label(e[0])}->{{{','.join(_label(b) for b in e[1])}}}"
    return f"{_label(e[0])}+{_label(e[1])}={_label(e[2])}"


def dumps(x, kind: str | None = None, width: int = 78) -> str:
    data = to_json(x, kind)
    lines = [f"format: {data['format']}", f"kind: {data['kind']}"]
    for key in _ORDER[2:]:
        if key not in data:
            continue
        items = [data[key]] if key == "bottom" else data[key]
        words = [_entry(key, e) for e in items]
        line = f"{key}:"
        for w in words:
            if len(line) + 1 + len(w) > width and line.strip() != f"{key}:":
                lines.append(line)
                line = "   "
            line += " " + w
        lines.append(line)
    return "\n".join(lines) + "\n"


def from_json(data: dict, validate: bool = False) -> Document:
    """Inverse of ``to_json``; the same checks as the text parser apply."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    for key in data:
        if key not in _ORDER:
            raise ParseError(f"unknown key {key!r}")
    for key in ("format", "kind", "atoms"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    if data["format"] != FORMAT:
        raise ParseError(f"unsupported format {data['format']!r}")
    kind = data["kind"]
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")

    def tok(x) -> _Tok:
        if not isinstance(x, str):
            raise ParseError(f"expected an element label, found {x!r}")
        return _Tok("name", x, 0, 0)

    def shaped(key, items):
        shape = SHAPES[key]
        try:
            if shape == "atom":
                return [tok(items)]
            if shape == "pair":
                return [(tok(a), tok(b)) for a, b in items]
            if shape == "upper":
                return [(tok(a), [tok(b) for b in B]) for a, B in items]
            return [(tok(a), tok(b), tok(c)) for a, b, c in items]
        except (TypeError, ValueError):
            raise ParseError(f"malformed entries in {key!r}") from None

    atoms = [tok(a) for a in data["atoms"]]
    fields = {k: (0, shaped(k, v)) for k, v in data.items() if k not in ("format", "kind", "atoms")}
    doc = _guarded(lambda: _build(kind, atoms, fields, 0))
    if validate:
        require_valid(doc)
    return doc


def canonical(text: str) -> str:
    return dumps(parse(text))


def equal_structures(a, b) -> bool:
    """Same kind and same canonical content."""
    return to_json(a) == to_json(b)


def parse_relation(text: str, source: Carrier, target: Carrier):
    """Pairs ``a->b`` give a Relation; generators ``a->{b,c}`` give an
    UpperRelation into Fin of ``target``. Mixing the two is an error."""
    toks = _lex(text, 1, 1)
    uses_sets = any(t.kind == "{" for t in toks)
    entries = _entries("cov" if uses_sets else "le", 1, toks)

    def idx(car: Carrier, tok: _Tok) -> int:
        return _index(car, tok)

    if uses_sets:
        rc.fin_carrier(target)
        m = np.zeros((len(source), 1 << len(target)), dtype=bool)
        for a, B in entries:
            m[idx(source, a), rc.mask_of(idx(target, b) for b in B)] = True
        return UpperRelation(source, target, m)
    m = np.zeros((len(source), len(target)), dtype=bool)
    for a, b in entries:
        m[idx(source, a), idx(target, b)] = True
    return Relation(source, target, m)
