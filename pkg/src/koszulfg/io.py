"""Input documents, the path-expression grammar, and report rendering.

A document is plain UTF-8 text split into sections::

    [vertices]
    1 2 3
    [arrows]
    a1: 1 -> 2
    r1: 3 -> 1 deg=1
    [relations]
    b*r1 - a1*a2*r2
    [potential]
    + x1 x2 x3 x4
    - x1 y2 x3 y4
    [options]
    kind = quiver-algebra

Expressions: ``expr := term (('+'|'-') term)*``, ``term := [rational] factor+``,
``factor := identifier | '(' expr ')'``.  Juxtaposition or ``*`` composes
left to right (``a b`` is ``a`` then ``b``); ``e_v`` is the lazy path at ``v``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .core import ArrowGrading, GradedPresentation, PathElement, Quiver, lazy_word
from .errors import ParseError, StructuralError
from .field import GF, QQ, Field

__all__ = [
    "parse_expression", "InputDocument", "parse_document", "load_document",
    "Report", "render_text", "canonical",
]

KINDS = ("quiver-algebra", "potential", "dimer")
NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*()]))")


def _tokens(s: str):
    pos = 0
    out = []
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        m = TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {s[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(s)))
    return out


class _Parser:
    def __init__(self, s: str, q: Quiver, field: Field):
        self.s = s
        self.q = q
        self.field = field
        self.toks = _tokens(s)
        self.i = 0
        self.lazy = {f"e_{v}": v for v in q.vertices}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self) -> PathElement:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> PathElement:
        kind, val, pos = self.peek()
        coeff = self.field.one
        if kind == "num":
            self.take()
            try:
                coeff = self.field(Fraction(val))
            except (ZeroDivisionError, ValueError) as exc:
                raise ParseError(f"malformed rational {val!r}", pos) from exc
            if self.peek()[0] == "op" and self.peek()[1] == "*":
                self.take()
        factors = []
        while True:
            kind, val, pos = self.peek()
            if kind == "name" or (kind == "op" and val == "("):
                factors.append((pos, self.factor()))
                if self.peek()[0] == "op" and self.peek()[1] == "*":
                    self.take()
                    if not (self.peek()[0] == "name" or self.peek()[1] == "("):
                        raise ParseError("expected a factor after '*'", self.peek()[2])
                continue
            break
        if not factors:
            if kind == "num" or (coeff != self.field.one):
                raise ParseError("a coefficient needs a path", pos)
            raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)
        acc = factors[0][1]
        for fpos, f in factors[1:]:
            prod = acc * f
            if not prod and acc and f:
                raise ParseError("paths do not compose", fpos)
            acc = prod
        return acc.scale(coeff)

    def factor(self) -> PathElement:
        kind, val, pos = self.take()
        if kind == "name":
            if val in self.lazy:
                w = lazy_word(self.q.vindex[self.lazy[val]])
            elif val in self.q.aindex:
                w = (self.q.aindex[val],)
            else:
                raise ParseError(f"unknown identifier {val!r}", pos)
            return PathElement(self.q, {w: self.field.one}, self.field)
        e = self.expr()
        kind, val, pos = self.take()
        if not (kind == "op" and val == ")"):
            raise ParseError("expected ')'", pos)
        return e

    def parse(self) -> PathElement:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return e


def parse_expression(s: str, q: Quiver, field: Field = QQ) -> PathElement:
    """Parse a path-algebra expression over ``q``."""
    return _Parser(s, q, field).parse()


# documents

ARROW = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*:\s*(?P<src>\S+)\s*->\s*(?P<tgt>[^\s\[]+)"
                   r"\s*(?:\[?\s*deg\s*=\s*(?P<deg>-?\d+)\s*\]?)?\s*$")
SECTION = re.compile(r"^\[(?P<name>[a-z]+)\]$")


@dataclass
class InputDocument:
    kind: str
    quiver: Quiver
    degrees: dict
    relations: list = dc_field(default_factory=list)       # PathElements
    potential: list = dc_field(default_factory=list)       # (sign, PathElement)
    options: dict = dc_field(default_factory=dict)
    field: Field = QQ
    source: str = ""

    @property
    def grading(self) -> ArrowGrading:
        return ArrowGrading(self.quiver, self.degrees)

    def has_grading(self) -> bool:
        return any(self.degrees.values())

    def presentation(self) -> GradedPresentation:
        if self.kind != "quiver-algebra":
            from .potential import jacobian_algebra
            return jacobian_algebra(self.potential_object(), self.grading)
        return GradedPresentation(self.quiver, self.relations, self.grading, self.field)

    def potential_object(self):
        from .potential import Potential
        if not self.potential:
            raise StructuralError("the document has no [potential] section")
        terms = []
        for c, e in self.potential:
            for w, x in e.terms.items():
                terms.append((c * x, w))
        return Potential(self.quiver, terms, self.field)

    def dimer(self):
        from .dimer import DimerQP
        return DimerQP.from_potential(self.potential_object())

    def describe(self):
        return {"kind": self.kind, "source": self.source,
                "vertices": [str(v) for v in self.quiver.vertices],
                "arrows": [[a, str(s), str(t), self.degrees.get(a, 0)] for a, s, t in self.quiver.arrows],
                "field": repr(self.field)}


def _vertex(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse_document(text: str, source: str = "<string>") -> InputDocument:
    sections: dict = {}
    current = None
    offsets: dict = {}
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        start = offset
        offset += len(raw)
        if not line:
            continue
        m = SECTION.match(line)
        if m:
            current = m.group("name")
            if current not in ("vertices", "arrows", "relations", "potential", "options"):
                raise ParseError(f"unknown section [{current}]", start)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ParseError("content before the first section", start)
        sections[current].append(line)
        offsets[(current, len(sections[current]) - 1)] = start

    def where(sec, k):
        return offsets.get((sec, k))

    options = {}
    for k, line in enumerate(sections.get("options", [])):
        if "=" not in line:
            raise ParseError(f"expected 'key = value' in [options]: {line!r}", where("options", k))
        key, val = (x.strip() for x in line.split("=", 1))
        options[key] = val
    kind = options.get("kind")
    if kind is None:
        kind = "quiver-algebra" if "relations" in sections or "potential" not in sections else "potential"
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    char = int(options.get("char", options.get("characteristic", 0)))
    field = QQ if char == 0 else GF(char)

    vertices = []
    for k, line in enumerate(sections.get("vertices", [])):
        for tok in re.split(r"[\s,]+", line):
            if tok:
                vertices.append(_vertex(tok))
    arrows, degrees = [], {}
    for k, line in enumerate(sections.get("arrows", [])):
        m = ARROW.match(line)
        if not m:
            raise ParseError(f"malformed arrow line {line!r}", where("arrows", k))
        s, t = _vertex(m.group("src")), _vertex(m.group("tgt"))
        for v in (s, t):
            if v not in vertices:
                if "vertices" in sections:
                    raise ParseError(f"arrow {m.group('name')} uses undeclared vertex {v!r}",
                                     where("arrows", k))
                vertices.append(v)
        arrows.append((m.group("name"), s, t))
        degrees[m.group("name")] = int(m.group("deg") or 0)
    if not vertices:
        raise ParseError("no vertices declared")
    try:
        q = Quiver(vertices, arrows)
    except StructuralError as exc:
        raise ParseError(str(exc)) from exc

    def expr(sec, k, s, base=0):
        try:
            return parse_expression(s, q, field)
        except ParseError as exc:
            line_start = where(sec, k) or 0
            pos = None if exc.position is None else line_start + base + exc.position
            msg = str(exc).rsplit(" (at offset", 1)[0]
            raise ParseError(f"{source}: {msg} in {s!r}", pos) from None

    relations = [expr("relations", k, line) for k, line in enumerate(sections.get("relations", []))]
    if any(degrees.values()):
        g = ArrowGrading(q, degrees)
        for k, r in enumerate(relations):
            if not r.is_homogeneous(g):
                raise ParseError(f"{source}: relation {sections['relations'][k]!r} is not homogeneous "
                                 "for the declared arrow degrees", where("relations", k))
    potential = []
    for k, line in enumerate(sections.get("potential", [])):
        sign = 1
        body = line
        if line[0] in "+-":
            sign = -1 if line[0] == "-" else 1
            body = line[1:]
        e = expr("potential", k, body, len(line) - len(body))
        potential.append((field(sign), e))
    if kind == "quiver-algebra" and potential and not relations:
        kind = "potential"
    if kind in ("potential", "dimer") and not potential:
        raise ParseError(f"kind {kind} needs a [potential] section")
    return InputDocument(kind, q, degrees, relations, potential, options, field, source)


def load_document(path) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), str(path))


# reports

VERSION = "0.1.0"


def canonical(obj):
    """JSON-compatible canonical form (tuples to lists, scalars to strings or ints)."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [canonical(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=lambda x: json.dumps(x, sort_keys=True))
        return items
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    s = str(obj)
    return int(s) if re.fullmatch(r"-?\d+", s) else s


@dataclass
class Report:
    command: str
    input: dict
    bounds: dict
    evidence: dict
    verdict: str | None = None
    result: object = None
    warnings: list = dc_field(default_factory=list)

    def to_dict(self):
        out = {"command": self.command, "input": self.input, "bounds": self.bounds}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        else:
            out["result"] = self.result
        out["evidence"] = self.evidence
        out["warnings"] = list(self.warnings)
        out["version"] = VERSION
        return canonical(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        return render_text(self.to_dict())


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        if not obj:
            yield prefix, "{}"
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if not isinstance(obj, str) else obj


def render_text(d: dict) -> str:
    """Aligned ``key  value`` lines carrying every leaf of the report."""
    rows = list(_flatten(d))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def parse_text(text: str) -> dict:
    """Inverse of :func:`render_text` on the flattened leaves (for round-trip checks)."""
    out = {}
    for line in text.splitlines():
        key, _, val = line.partition("  ")
        out[key.strip()] = val.strip()
    return out
