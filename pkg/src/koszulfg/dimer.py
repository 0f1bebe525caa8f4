"""Dimer models on the quiver side: faces are the terms of a potential.

A :class:`DimerQP` keeps its positive (white) and negative (black) face
cycles separately; every arrow lies on exactly one face of each colour.  A
perfect matching is a set of arrows meeting every face exactly once, and it
grades the Jacobian algebra by putting matched arrows in degree 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import ArrowGrading, GradedPresentation, Quiver
from .errors import StructuralError
from .field import QQ
from .gb import degree_zero_analysis
from .potential import Potential, canonical_rotation, jacobian_algebra


class DimerQP:
    def __init__(self, quiver: Quiver, positive, negative):
        self.quiver = quiver
        self.positive = [self._face(f) for f in positive]
        self.negative = [self._face(f) for f in negative]
        for name in quiver.arrow_names:
            i = quiver.aindex[name]
            np_ = sum(f.count(i) for f in self.positive)
            nn = sum(f.count(i) for f in self.negative)
            if np_ != 1 or nn != 1:
                raise StructuralError(
                    f"arrow {name!r} lies on {np_} positive and {nn} negative faces (need 1 and 1)")

    def _face(self, f):
        q = self.quiver
        if isinstance(f, tuple) and f and all(isinstance(i, int) for i in f):
            w = f
        else:
            w = q.word_of(list(f))
        if w[0] < 0 or q.word_source(w) != q.word_target(w):
            raise StructuralError(f"face {q.word_str(w)} is not a cycle")
        return canonical_rotation(w)

    @classmethod
    def from_potential(cls, W: Potential):
        pos, neg = [], []
        for w, c in W.terms:
            if c == 1:
                pos.append(w)
            elif c == -1:
                neg.append(w)
            else:
                raise StructuralError("dimer potentials have coefficients ±1")
        return cls(W.quiver, pos, neg)

    @property
    def faces(self):
        return self.positive + self.negative

    def potential(self) -> Potential:
        return Potential(self.quiver, [(1, w) for w in self.positive]
                         + [(-1, w) for w in self.negative], QQ)

    def jacobian(self, grading=None) -> GradedPresentation:
        return jacobian_algebra(self.potential(), grading)

    def face_str(self, w):
        return self.quiver.word_str(w)


def is_perfect_matching(D: DimerQP, arrows) -> bool:
    q = D.quiver
    idx = {q.aindex[a] for a in arrows}
    return all(sum(1 for i in f if i in idx) == 1 for f in D.faces)


def perfect_matchings(D: DimerQP) -> list[frozenset]:
    """All arrow sets meeting every face exactly once (exact-cover backtracking)."""
    q = D.quiver
    faces = D.faces
    na = len(q.arrows)
    # arrows occurring twice on a face can never be matched
    arrow_faces = [[] for _ in range(na)]
    banned = set()
    for fi, f in enumerate(faces):
        for i in set(f):
            if f.count(i) > 1:
                banned.add(i)
            arrow_faces[i].append(fi)
    face_arrows = [sorted(set(f) - banned) for f in faces]
    found = []
    covered = [False] * len(faces)
    chosen = []

    def search():
        best = None
        best_opts = None
        for fi in range(len(faces)):
            if covered[fi]:
                continue
            opts = [i for i in face_arrows[fi] if not any(covered[g] for g in arrow_faces[i])]
            if best is None or len(opts) < len(best_opts):
                best, best_opts = fi, opts
                if not opts:
                    break
        if best is None:
            found.append(frozenset(q.arrows[i][0] for i in chosen))
            return
        for i in best_opts:
            for g in arrow_faces[i]:
                covered[g] = True
            chosen.append(i)
            search()
            chosen.pop()
            for g in arrow_faces[i]:
                covered[g] = False

    search()
    order = {a: k for k, a in enumerate(q.arrow_names)}
    out = sorted(set(found), key=lambda m: sorted(order[a] for a in m))
    return out


def matching_grading(D: DimerQP, m) -> ArrowGrading:
    if not is_perfect_matching(D, m):
        raise StructuralError(f"{sorted(m)} is not a perfect matching")
    return ArrowGrading(D.quiver, {a: (1 if a in m else 0) for a in D.quiver.arrow_names})


@dataclass
class DegreeZeroResult:
    finite: bool
    dimension: int | None = None
    cycle: tuple | None = None


def degree_zero_finite_dim(J: GradedPresentation, max_length: int = 64) -> DegreeZeroResult:
    """Finite dimensionality of the degree-0 part via the normal-word graph.

    The witness is the number of degree-0 normal words, or a pumping cycle of
    degree-0 arrows.  Raises :class:`InconclusiveError` if ``max_length`` is
    too small for the Gröbner basis to settle.
    """
    kind, data = degree_zero_analysis(J, max_length)
    if kind == "finite":
        return DegreeZeroResult(True, dimension=len(data[0]))
    names = tuple(J.quiver.arrows[i][0] for i in data)
    return DegreeZeroResult(False, cycle=names)


# R-charge consistency by Fourier-Motzkin elimination

@dataclass
class Feasibility:
    feasible: bool
    charges: dict | None = None


def _normalize(coeffs, const):
    piv = None
    for k in sorted(coeffs):
        piv = abs(coeffs[k])
        break
    if not piv:
        return coeffs, const
    return {k: v / piv for k, v in coeffs.items()}, const / piv


def fourier_motzkin(equalities, inequalities, variables):
    """Exact feasibility of ``{Σ c x + c0 = 0}`` and ``{Σ c x + c0 > 0 or >= 0}``.

    ``equalities``: list of ``(coeffs, c0)``; ``inequalities``: list of
    ``(coeffs, c0, strict)``.  Returns a rational solution dict, or ``None``.
    """
    eqs = [({k: Fraction(v) for k, v in c.items() if v}, Fraction(c0)) for c, c0 in equalities]
    ineqs = [({k: Fraction(v) for k, v in c.items() if v}, Fraction(c0), s) for c, c0, s in inequalities]
    subst = []   # (var, coeffs, const): var = Σ coeffs x + const
    while eqs:
        c, c0 = eqs.pop()
        if not c:
            if c0 != 0:
                return None
            continue
        x = min(c)
        a = c[x]
        expr = {k: -v / a for k, v in c.items() if k != x}
        e0 = -c0 / a
        subst.append((x, expr, e0))

        def sub(cc, cc0):
            if x not in cc:
                return cc, cc0
            m = cc[x]
            out = {k: v for k, v in cc.items() if k != x}
            for k, v in expr.items():
                out[k] = out.get(k, 0) + m * v
            return {k: v for k, v in out.items() if v}, cc0 + m * e0

        eqs = [sub(cc, cc0) for cc, cc0 in eqs]
        ineqs = [(*sub(cc, cc0), s) for cc, cc0, s in ineqs]
    free = sorted({k for cc, _, _ in ineqs for k in cc})
    stages = []
    current = ineqs
    for x in free:
        pos, neg, rest = [], [], []
        for cc, c0, s in current:
            v = cc.get(x, 0)
            (pos if v > 0 else neg if v < 0 else rest).append((cc, c0, s))
        stages.append((x, pos, neg))
        new = list(rest)
        seen = set()
        for cp, p0, ps in pos:
            for cn, n0, ns in neg:
                a, b = cp[x], -cn[x]
                cc = {}
                for k in set(cp) | set(cn):
                    if k == x:
                        continue
                    v = b * cp.get(k, 0) + a * cn.get(k, 0)
                    if v:
                        cc[k] = v
                c0 = b * p0 + a * n0
                cc, c0 = _normalize(cc, c0)
                key = (tuple(sorted(cc.items())), c0, ps or ns)
                if key not in seen:
                    seen.add(key)
                    new.append((cc, c0, ps or ns))
        current = new
    for cc, c0, s in current:
        if cc:
            continue
        if (s and c0 <= 0) or (not s and c0 < 0):
            return None
    # back substitution
    sol: dict = {}
    for x, pos, neg in reversed(stages):
        lo, lo_strict, hi, hi_strict = None, False, None, False
        for cc, c0, s in pos:    # a x + r > 0  ->  x > -r/a
            r = c0 + sum(v * sol[k] for k, v in cc.items() if k != x)
            bound = -r / cc[x]
            if lo is None or bound > lo or (bound == lo and s):
                lo, lo_strict = bound, s
        for cc, c0, s in neg:    # -b x + r > 0  ->  x < r/b
            r = c0 + sum(v * sol[k] for k, v in cc.items() if k != x)
            bound = r / -cc[x]
            if hi is None or bound < hi or (bound == hi and s):
                hi, hi_strict = bound, s
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = hi - 1
        elif hi is None:
            val = lo + 1
        else:
            val = (lo + hi) / 2 if (lo_strict or hi_strict) else lo
        sol[x] = val
    for x, expr, e0 in reversed(subst):
        sol[x] = e0 + sum(v * sol.get(k, Fraction(0)) for k, v in expr.items())
    for v in variables:
        sol.setdefault(v, Fraction(0))
    return sol


def consistency_feasible(D: DimerQP) -> Feasibility:
    """Existence of R-charges ``0 < R(a) < 2`` summing to 2 on every face and with
    ``Σ (1 - R(a)) = 2`` over the arrows incident to each vertex (loops twice)."""
    q = D.quiver
    names = q.arrow_names
    eqs = []
    for f in D.faces:
        c = {}
        for i in f:
            c[names[i]] = c.get(names[i], 0) + 1
        eqs.append((c, -2))
    for v in range(len(q.vertices)):
        c = {}
        count = 0
        for i, a in enumerate(names):
            m = (q.asrc[i] == v) + (q.atgt[i] == v)
            if m:
                c[a] = c.get(a, 0) - m
                count += m
        eqs.append((c, count - 2))
    ineqs = []
    for a in names:
        ineqs.append(({a: 1}, 0, True))
        ineqs.append(({a: -1}, 2, True))
    sol = fourier_motzkin(eqs, ineqs, names)
    if sol is None:
        return Feasibility(False)
    return Feasibility(True, {a: sol[a] for a in names})
