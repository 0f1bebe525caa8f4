"""Finite-dimensional algebras given by structure constants."""
from __future__ import annotations

from .core import GradedPresentation
from .errors import InconclusiveError, StructuralError
from .field import QQ, Field
from .linalg import add_scaled


class FDAlgebra:
    """Algebra with basis ``labels`` and products ``table[i][j] = {k: c}``.

    ``idempotents`` is a complete list of primitive orthogonal idempotents
    (vectors in the basis), named by ``vertices``.  ``grading`` optionally
    assigns a degree to each basis element.
    """

    def __init__(self, labels, table, idempotents, field: Field = QQ, grading=None,
                 vertices=None, check=True):
        self.labels = list(labels)
        n = len(self.labels)
        self.field = field
        self.table = [dict() for _ in range(n)]
        for i, row in enumerate(table):
            for j, prod in (row.items() if isinstance(row, dict) else enumerate(row)):
                prod = {k: field(c) for k, c in prod.items() if c}
                if prod:
                    self.table[i][j] = prod
        self.idempotents = [{k: field(c) for k, c in e.items() if c} for e in idempotents]
        self.vertices = list(vertices) if vertices is not None else list(range(1, len(idempotents) + 1))
        if len(self.vertices) != len(self.idempotents):
            raise StructuralError("need one vertex name per idempotent")
        self.grading = list(grading) if grading is not None else None
        if self.grading is not None and len(self.grading) != n:
            raise StructuralError("grading must give one degree per basis element")
        if check:
            self.validate()

    @property
    def dim(self):
        return len(self.labels)

    def __repr__(self):
        return f"FDAlgebra(dim={self.dim}, vertices={self.vertices})"

    # arithmetic

    def basis_vector(self, i):
        return {i: self.field.one}

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        table = self.table
        for i, a in x.items():
            row = table[i]
            if not row:
                continue
            for j, b in y.items():
                prod = row.get(j)
                if prod:
                    add_scaled(out, prod, a * b)
        return out

    def one(self) -> dict:
        out: dict = {}
        for e in self.idempotents:
            add_scaled(out, e, self.field.one)
        return out

    # checks

    def validate(self):
        n = self.dim
        for i in range(n):
            for j, prod in self.table[i].items():
                if not (0 <= j < n) or any(not (0 <= k < n) for k in prod):
                    raise StructuralError("structure constants reference unknown basis elements")
        if self.grading is not None:
            for i in range(n):
                for j, prod in self.table[i].items():
                    for k in prod:
                        if self.grading[k] != self.grading[i] + self.grading[j]:
                            raise StructuralError(
                                f"grading not multiplicative on {self.labels[i]} * {self.labels[j]}")
        bad = self.associativity_failure()
        if bad is not None:
            i, j, k = bad
            raise StructuralError(
                f"multiplication not associative on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        es = self.idempotents
        for a, e in enumerate(es):
            for b, f in enumerate(es):
                p = self.mul(e, f)
                want = e if a == b else {}
                if p != want:
                    raise StructuralError("idempotents are not orthogonal idempotents")
        one = self.one()
        for i in range(n):
            v = self.basis_vector(i)
            if self.mul(one, v) != v or self.mul(v, one) != v:
                raise StructuralError("idempotents do not sum to the identity")

    def associativity_failure(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                ij = self.table[i].get(j)
                for k in range(n):
                    left = self.mul(ij, {k: self.field.one}) if ij else {}
                    jk = self.table[j].get(k)
                    right = self.mul({i: self.field.one}, jk) if jk else {}
                    if left != right:
                        return (i, j, k)
        return None

    # structure

    def degree(self, i):
        return 0 if self.grading is None else self.grading[i]

    def degrees(self):
        return sorted(set(self.grading)) if self.grading is not None else [0]

    def highest_degree(self):
        return max(self.grading) if self.grading is not None else 0

    def graded_dimensions(self):
        if self.grading is None:
            return [self.dim]
        out = [0] * (self.highest_degree() + 1)
        for d in self.grading:
            out[d] += 1
        return out

    def component(self, d):
        return [i for i in range(self.dim) if self.degree(i) == d]

    def corner(self, v, w, x: dict) -> dict:
        """``e_v x e_w`` for vertex indices ``v``, ``w``."""
        return self.mul(self.mul(self.idempotents[v], x), self.idempotents[w])

    def opposite(self) -> "FDAlgebra":
        table = [dict() for _ in range(self.dim)]
        for i in range(self.dim):
            for j, prod in self.table[i].items():
                table[j][i] = prod
        return FDAlgebra(self.labels, table, self.idempotents, self.field, self.grading,
                         self.vertices, check=False)

    def structure_constants(self):
        """Dense ``{(i, j): {k: c}}`` view, for comparisons."""
        return {(i, j): dict(p) for i in range(self.dim) for j, p in self.table[i].items()}


def algebra_from_presentation(pres: GradedPresentation, max_length: int = 64, gb_bound=None):
    """Multiplication table of a finite-dimensional ``kQ/I`` on its normal words.

    Returns ``(algebra, words, gb)``; basis element ``i`` is the class of
    ``words[i]``.
    """
    from .gb import groebner, quotient_dimension

    total = quotient_dimension(pres, max_length)
    if total is None:
        raise StructuralError("the presented algebra is infinite dimensional")
    length = max(pres.max_relation_length() + 1, 2)
    while True:
        gb = groebner(pres, length if gb_bound is None else max(gb_bound, length))
        layers = gb.normal_words(length)
        if not layers[length]:
            break
        length *= 2
    words = [w for layer in layers for w in layer]
    longest = max(len(w) if w[0] >= 0 else 0 for w in words)
    if not gb.complete and gb.bound < 2 * longest:
        gb = groebner(pres, 2 * longest)
    if not gb.complete and gb.bound < 2 * longest:
        raise InconclusiveError("Gröbner basis too short to multiply normal words", 2 * longest)
    index = {w: i for i, w in enumerate(words)}
    q = pres.quiver
    table = [dict() for _ in words]
    for i, u in enumerate(words):
        for j, w in enumerate(words):
            x = q.compose_words(u, w)
            if x is None:
                continue
            nf = gb.nf_word(x)
            if nf:
                table[i][j] = {index[y]: c for y, c in nf.items()}
    idem = [{index[(-(v + 1),)]: pres.field.one} for v in range(len(q.vertices))]
    grading = [pres.grading.word_degree(w) for w in words]
    labels = [q.word_str(w) for w in words]
    alg = FDAlgebra(labels, table, idem, pres.field, grading, q.vertices, check=False)
    assert alg.dim == total
    return alg, words, gb

