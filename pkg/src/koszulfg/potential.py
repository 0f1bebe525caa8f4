"""Quivers with potential and their Jacobian algebras."""
from __future__ import annotations

from .core import ArrowGrading, GradedPresentation, Path, PathElement, Quiver
from .errors import StructuralError
from .field import QQ, Field


def canonical_rotation(w: tuple, rank=None) -> tuple:
    """Lexicographically least rotation of a cycle word (by arrow precedence ``rank``)."""
    n = len(w)
    key = (lambda x: tuple(rank[i] for i in x)) if rank is not None else (lambda x: x)
    return min((w[k:] + w[:k] for k in range(n)), key=key)


class Potential:
    """Linear combination of cycles, stored up to rotation."""

    def __init__(self, quiver: Quiver, terms, field: Field = QQ):
        self.quiver = quiver
        self.field = field
        acc: dict = {}
        for c, p in terms:
            if isinstance(p, Path):
                w = p.word
            elif isinstance(p, tuple) and p and all(isinstance(i, int) for i in p):
                w = p
            else:
                w = quiver.word_of(list(p))
            if w[0] < 0:
                raise StructuralError("potential terms must have positive length")
            if quiver.word_source(w) != quiver.word_target(w):
                raise StructuralError(f"term {quiver.word_str(w)} is not a cycle")
            w = canonical_rotation(w)
            v = acc.get(w, field.zero) + field(c)
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        self.terms = sorted(acc.items())

    def __eq__(self, other):
        return isinstance(other, Potential) and self.quiver == other.quiver and self.terms == other.terms

    def __hash__(self):
        return hash((self.quiver, tuple(self.terms)))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            s = self.field.to_str(c)
            neg = s.startswith("-")
            s = s.lstrip("-")
            body = self.quiver.word_str(w)
            text = body if s == "1" else f"{s}*{body}"
            parts.append(("- " if neg else "+ ") + text)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __repr__(self):
        return f"Potential({self})"


def cyclic_derivative(W: Potential, a) -> PathElement:
    """``∂_a W``: for each occurrence of ``a``, rotate it to the front and delete it."""
    q = W.quiver
    i = q.aindex[a] if isinstance(a, str) else a
    out: dict = {}
    for w, c in W.terms:
        n = len(w)
        for k in range(n):
            if w[k] != i:
                continue
            rest = w[k + 1:] + w[:k]
            if not rest:
                rest = (-(q.atgt[i] + 1),)
            v = out.get(rest, W.field.zero) + c
            if v:
                out[rest] = v
            else:
                out.pop(rest, None)
    return PathElement(q, out, W.field)


def jacobian_algebra(W: Potential, grading: ArrowGrading | None = None) -> GradedPresentation:
    """Presentation ``kQ/(∂_a W : a ∈ Q_1)`` (trivially graded unless a grading is given)."""
    if not W:
        raise StructuralError("the potential is zero")
    rels = []
    for a in W.quiver.arrow_names:
        r = cyclic_derivative(W, a)
        if r:
            rels.append(r)
    return GradedPresentation(W.quiver, rels, grading, W.field)
