"""Quivers, paths, arrow gradings and linear combinations of paths.

Composition is left to right: ``ab`` is ``a`` followed by ``b``.  Internally a
path is a *word*: a tuple of arrow indices, or ``(-(v+1),)`` for the lazy path
at the vertex with index ``v``.  The public :class:`Path` and
:class:`PathElement` classes wrap words together with their quiver.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError
from .field import QQ, Field


def lazy_word(v: int) -> tuple:
    return (-(v + 1),)


def is_lazy(w: tuple) -> bool:
    return w[0] < 0


def word_length(w: tuple) -> int:
    return 0 if w[0] < 0 else len(w)


class Quiver:
    """Finite quiver with ordered vertices and named arrows ``(name, source, target)``."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple((str(a), s, t) for a, s, t in arrows)
        self.vindex = {}
        for i, v in enumerate(self.vertices):
            if v in self.vindex:
                raise StructuralError(f"duplicate vertex {v!r}")
            self.vindex[v] = i
        self.aindex = {}
        self.asrc = []
        self.atgt = []
        for i, (a, s, t) in enumerate(self.arrows):
            if a in self.aindex:
                raise StructuralError(f"duplicate arrow name {a!r}")
            if s not in self.vindex or t not in self.vindex:
                raise StructuralError(f"arrow {a!r} uses an undeclared vertex")
            self.aindex[a] = i
            self.asrc.append(self.vindex[s])
            self.atgt.append(self.vindex[t])
        self._key = (self.vertices, self.arrows)
        # arrows leaving each vertex, in declaration order
        self.out_arrows = [[] for _ in self.vertices]
        for i, s in enumerate(self.asrc):
            self.out_arrows[s].append(i)

    def __eq__(self, other):
        return isinstance(other, Quiver) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        arrows = ", ".join(f"{a}:{s}->{t}" for a, s, t in self.arrows)
        return f"Quiver({list(self.vertices)}, [{arrows}])"

    @property
    def arrow_names(self):
        return [a for a, _, _ in self.arrows]

    def num_vertices(self):
        return len(self.vertices)

    def num_arrows(self):
        return len(self.arrows)

    # words

    def word_source(self, w) -> int:
        return -w[0] - 1 if w[0] < 0 else self.asrc[w[0]]

    def word_target(self, w) -> int:
        return -w[0] - 1 if w[0] < 0 else self.atgt[w[-1]]

    def compose_words(self, u, w):
        """Concatenation of two words, or ``None`` when the endpoints do not match."""
        if self.word_target(u) != self.word_source(w):
            return None
        if u[0] < 0:
            return w
        if w[0] < 0:
            return u
        return u + w

    def word_of(self, names, source=None) -> tuple:
        if not names:
            if source is None:
                raise StructuralError("a lazy path needs its vertex")
            return lazy_word(self.vindex[source])
        w = []
        for name in names:
            if name not in self.aindex:
                raise StructuralError(f"unknown arrow {name!r}")
            i = self.aindex[name]
            if w and self.atgt[w[-1]] != self.asrc[i]:
                raise StructuralError(f"arrows {self.arrows[w[-1]][0]!r} and {name!r} do not compose")
            w.append(i)
        return tuple(w)

    def word_names(self, w):
        return [] if w[0] < 0 else [self.arrows[i][0] for i in w]

    def word_str(self, w) -> str:
        if w[0] < 0:
            return f"e_{self.vertices[-w[0] - 1]}"
        return "*".join(self.arrows[i][0] for i in w)

    # public constructors

    def path(self, *names) -> "Path":
        return Path(self, self.word_of(names))

    def lazy(self, v) -> "Path":
        if v not in self.vindex:
            raise StructuralError(f"unknown vertex {v!r}")
        return Path(self, lazy_word(self.vindex[v]))

    def element(self, terms=(), field: Field = QQ) -> "PathElement":
        """``terms`` is an iterable of ``(coefficient, Path or arrow-name list)``."""
        d: dict = {}
        for c, p in terms:
            if not isinstance(p, Path):
                p = self.path(*p)
            elif p.quiver != self:
                raise StructuralError("path from a different quiver")
            c = field(c)
            v = d.get(p.word, field.zero) + c
            if v:
                d[p.word] = v
            else:
                d.pop(p.word, None)
        return PathElement(self, d, field)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a, t, s) for a, s, t in self.arrows])


class _Zero:
    """The distinguished zero returned by composition of non-composable paths."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO"

    def __bool__(self):
        return False


ZERO = _Zero()


@dataclass(frozen=True)
class Path:
    quiver: Quiver
    word: tuple

    @property
    def source(self):
        return self.quiver.vertices[self.quiver.word_source(self.word)]

    @property
    def target(self):
        return self.quiver.vertices[self.quiver.word_target(self.word)]

    @property
    def arrows(self):
        return self.quiver.word_names(self.word)

    def __len__(self):
        return word_length(self.word)

    def is_lazy(self):
        return self.word[0] < 0

    def __mul__(self, other):
        return compose_paths(self, other)

    def __str__(self):
        return self.quiver.word_str(self.word)

    def __repr__(self):
        return f"Path({self})"


def compose_paths(p: Path, q: Path):
    """``pq`` (first ``p`` then ``q``), or :data:`ZERO` when ``target(p) != source(q)``."""
    if p.quiver != q.quiver:
        raise StructuralError("paths from different quivers")
    w = p.quiver.compose_words(p.word, q.word)
    if w is None:
        return ZERO
    return Path(p.quiver, w)


class ArrowGrading:
    """Nonnegative integer degree for every arrow of a quiver."""

    def __init__(self, quiver: Quiver, degrees=None):
        degrees = {} if degrees is None else dict(degrees)
        missing = [a for a in quiver.arrow_names if a not in degrees]
        if missing:
            raise StructuralError(f"grading has no degree for arrows {missing}")
        extra = [a for a in degrees if a not in quiver.aindex]
        if extra:
            raise StructuralError(f"grading mentions unknown arrows {extra}")
        for a, d in degrees.items():
            if int(d) != d or d < 0:
                raise StructuralError(f"degree of {a!r} must be a nonnegative integer")
        self.quiver = quiver
        self.degrees = {a: int(degrees[a]) for a in quiver.arrow_names}
        self.by_index = [self.degrees[a] for a in quiver.arrow_names]

    @classmethod
    def trivial(cls, quiver):
        return cls(quiver, {a: 0 for a in quiver.arrow_names})

    @classmethod
    def by_length(cls, quiver):
        return cls(quiver, {a: 1 for a in quiver.arrow_names})

    def __getitem__(self, a):
        return self.degrees[a]

    def __eq__(self, other):
        return isinstance(other, ArrowGrading) and self.quiver == other.quiver and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.quiver, tuple(self.by_index)))

    def __repr__(self):
        return f"ArrowGrading({self.degrees})"

    def word_degree(self, w) -> int:
        if w[0] < 0:
            return 0
        g = self.by_index
        return sum(g[i] for i in w)

    def is_trivial(self):
        return not any(self.by_index)


def path_degree(p: Path, g: ArrowGrading) -> int:
    if g.quiver != p.quiver:
        missing = [a for a in p.arrows if a not in g.degrees]
        if missing:
            raise StructuralError(f"grading has no degree for arrows {missing}")
        return sum(g.degrees[a] for a in p.arrows)
    return g.word_degree(p.word)


def word_sort_key(w):
    return (word_length(w), w)


class PathElement:
    """Finite linear combination of paths with exact nonzero coefficients."""

    __slots__ = ("quiver", "terms", "field")

    def __init__(self, quiver: Quiver, terms: dict, field: Field = QQ):
        self.quiver = quiver
        self.field = field
        self.terms = {w: c for w, c in terms.items() if c}

    @classmethod
    def from_path(cls, p: Path, coeff=1, field: Field = QQ):
        return cls(p.quiver, {p.word: field(coeff)}, field)

    def _check(self, other):
        if not isinstance(other, PathElement):
            raise TypeError("expected a PathElement")
        if other.quiver != self.quiver:
            raise StructuralError("elements of different path algebras")
        if other.field != self.field:
            raise StructuralError("elements over different fields")

    def __add__(self, other):
        if isinstance(other, Path):
            other = PathElement.from_path(other, 1, self.field)
        self._check(other)
        d = dict(self.terms)
        for w, c in other.terms.items():
            v = d.get(w)
            v = c if v is None else v + c
            if v:
                d[w] = v
            else:
                d.pop(w, None)
        return PathElement(self.quiver, d, self.field)

    def __neg__(self):
        return PathElement(self.quiver, {w: -c for w, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        if isinstance(other, Path):
            other = PathElement.from_path(other, 1, self.field)
        return self + (-other)

    def scale(self, c):
        c = self.field(c)
        return PathElement(self.quiver, {w: c * x for w, x in self.terms.items()}, self.field)

    def __mul__(self, other):
        if isinstance(other, Path):
            other = PathElement.from_path(other, 1, self.field)
        if not isinstance(other, PathElement):
            return self.scale(other)
        self._check(other)
        q = self.quiver
        d: dict = {}
        for u, c in self.terms.items():
            for w, e in other.terms.items():
                x = q.compose_words(u, w)
                if x is None:
                    continue
                v = d.get(x)
                v = c * e if v is None else v + c * e
                if v:
                    d[x] = v
                else:
                    del d[x]
        return PathElement(q, d, self.field)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if isinstance(other, Path):
            other = PathElement.from_path(other, 1, self.field)
        if not isinstance(other, PathElement):
            return NotImplemented
        return self.quiver == other.quiver and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.sorted_terms()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: word_sort_key(t[0]))

    def paths(self):
        return [Path(self.quiver, w) for w, _ in self.sorted_terms()]

    def items(self):
        return [(Path(self.quiver, w), c) for w, c in self.sorted_terms()]

    def coefficient(self, p: Path):
        return self.terms.get(p.word, self.field.zero)

    def max_length(self):
        return max((word_length(w) for w in self.terms), default=0)

    def min_length(self):
        return min((word_length(w) for w in self.terms), default=0)

    def degrees(self, g: ArrowGrading):
        return {g.word_degree(w) for w in self.terms}

    def is_homogeneous(self, g: ArrowGrading):
        return len(self.degrees(g)) <= 1

    def endpoints(self):
        q = self.quiver
        return {(q.word_source(w), q.word_target(w)) for w in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            s = self.field.to_str(c)
            neg = s.startswith("-")
            if neg:
                s = s[1:]
            body = self.quiver.word_str(w)
            text = body if s == "1" else f"{s}*{body}"
            if not parts:
                parts.append(("-" if neg else "") + text)
            else:
                parts.append(("- " if neg else "+ ") + text)
        return " ".join(parts)

    def __repr__(self):
        return f"PathElement({self})"


class GradedPresentation:
    """Quiver with relations and an arrow grading: the algebra ``kQ/I``.

    Relations whose terms have several endpoint pairs are split into their
    ``e_v r e_w`` components, which generate the same ideal.
    """

    def __init__(self, quiver: Quiver, relations=(), grading: ArrowGrading | None = None,
                 field: Field | None = None):
        rels = list(relations)
        if field is None:
            field = rels[0].field if rels else QQ
        self.quiver = quiver
        self.field = field
        self.grading = ArrowGrading.trivial(quiver) if grading is None else grading
        if self.grading.quiver != quiver:
            raise StructuralError("grading belongs to a different quiver")
        out = []
        for r in rels:
            if r.quiver != quiver:
                raise StructuralError(f"relation {r} is not in this path algebra")
            if r.field != field:
                raise StructuralError(f"relation {r} is over {r.field}, expected {field}")
            if not r.terms:
                continue
            parts: dict = {}
            for w, c in r.terms.items():
                key = (quiver.word_source(w), quiver.word_target(w))
                parts.setdefault(key, {})[w] = c
            for key in sorted(parts):
                out.append(PathElement(quiver, parts[key], field))
        self.relations = out
        self._gb_cache: dict = {}

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"GradedPresentation({self.quiver!r}, [{rels}], {self.grading.degrees})"

    def with_grading(self, grading) -> "GradedPresentation":
        if not isinstance(grading, ArrowGrading):
            grading = ArrowGrading(self.quiver, grading)
        return GradedPresentation(self.quiver, self.relations, grading, self.field)

    def is_admissible(self) -> bool:
        return all(r.min_length() >= 2 for r in self.relations)

    def inhomogeneous_relations(self):
        return [r for r in self.relations if not r.is_homogeneous(self.grading)]

    def is_homogeneous(self):
        return not self.inhomogeneous_relations()

    def max_relation_length(self):
        return max((r.max_length() for r in self.relations), default=0)

    def relation_degree(self, r) -> int:
        return max(r.degrees(self.grading), default=0)
