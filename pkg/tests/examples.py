"""Builders for the small algebras used across the test modules."""
import itertools
from pathlib import Path

import flint

from koszulfg.algebra import algebra_from_presentation
from koszulfg.core import ArrowGrading, GradedPresentation, Quiver
from koszulfg.dimer import DimerQP, matching_grading
from koszulfg.gb import groebner, in_ideal
from koszulfg.modcplx import ungraded
from koszulfg.potential import Potential
from koszulfg.present import degree_zero_part, trivial_extension

DATA = Path(__file__).resolve().parents[1] / "src" / "koszulfg" / "data"


def path_algebra(q, relations=()):
    pres = GradedPresentation(q, list(relations), ArrowGrading.trivial(q))
    return ungraded(algebra_from_presentation(pres)[0])


def point():
    return path_algebra(Quiver([1], []))


def kronecker(m):
    return path_algebra(Quiver([1, 2], [(f"a{i}", 1, 2) for i in range(m)]))


def linear_a(n):
    return path_algebra(Quiver(list(range(1, n + 1)), [(f"a{i}", i, i + 1) for i in range(1, n)]))


def example_quiver():
    return Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3), ("b", 1, 3)])


def example_algebra():
    """Path algebra of 1 -> 2 -> 3 with a shortcut 1 -> 3."""
    return path_algebra(example_quiver())


def conifold_quiver():
    arrows = []
    for i, (s, t) in enumerate([(1, 2), (2, 3), (3, 4), (4, 1)], start=1):
        arrows += [(f"x{i}", s, t), (f"y{i}", s, t)]
    return Quiver([1, 2, 3, 4], arrows)


def conifold_potential(q=None):
    q = q or conifold_quiver()
    return Potential(q, [(1, "x1 x2 x3 x4".split()), (1, "y1 y2 y3 y4".split()),
                         (-1, "x1 y2 x3 y4".split()), (-1, "y1 x2 y3 x4".split())])


def conifold_dimer():
    return DimerQP.from_potential(conifold_potential())


def dimer_degree_zero():
    D = conifold_dimer()
    J = D.jacobian(matching_grading(D, {"x4", "y4"}))
    return degree_zero_part(J)


def cartan(A):
    """``C[v][w] = dim e_v A e_w``, computed by dense ranks over QQ."""
    n = len(A.idempotents)
    C = [[0] * n for _ in range(n)]
    for v, e in enumerate(A.idempotents):
        for w, f in enumerate(A.idempotents):
            rows = []
            for k in range(A.dim):
                x = A.mul(A.mul(e, {k: A.field.one}), f)
                rows.append([x.get(i, 0) for i in range(A.dim)])
            C[v][w] = flint.fmpq_mat(rows).rank()
    return C


def coxeter_inverse_iterates(C, start, steps):
    """Row vectors ``x_{j} = -x_{j-1} C^{-T} C`` (the inverse Coxeter transformation)."""
    Cm = flint.fmpq_mat(C)
    T = -(Cm.transpose().inv() * Cm)
    x = flint.fmpq_mat([start])
    out = []
    for _ in range(steps):
        x = x * T
        out.append([int(x[0, i]) for i in range(x.ncols())])
    return out


def same_ideal(P, Q, bound=8):
    """Mutual reduction: every relation of each presentation lies in the ideal of the other."""
    gp, gq = groebner(P, bound), groebner(Q, bound)
    return all(in_ideal(r, gq) for r in P.relations) and all(in_ideal(r, gp) for r in Q.relations)


def rename_arrows(P, q2):
    """Transport the relations of ``P`` to the quiver ``q2`` along arrow names."""
    rels = [q2.element([(c, list(P.quiver.word_names(w))) for w, c in r.terms.items()]) for r in P.relations]
    g = ArrowGrading(q2, {a: P.grading[a] if a in P.quiver.aindex else 0 for a in q2.arrow_names})
    return GradedPresentation(q2, rels, g)


def matched_ideal_equal(P, target, bound=8):
    """Try the endpoint- and degree-preserving arrow bijections from ``P`` onto ``target``."""
    qp, qt = P.quiver, target.quiver
    new = [a for a in qp.arrow_names if a not in qt.aindex]
    free = [a for a in qt.arrow_names if a not in qp.aindex]
    if len(new) != len(free):
        return None
    for perm in itertools.permutations(free):
        ren = dict(zip(new, perm))
        ok = all(qp.arrows[qp.aindex[a]][1:] == qt.arrows[qt.aindex[b]][1:]
                 and P.grading[a] == target.grading[b] for a, b in ren.items())
        if not ok:
            continue
        arrows = [(ren.get(a, a), s, t) for a, s, t in qp.arrows]
        q2 = Quiver(list(qp.vertices), arrows)
        rels = [q2.element([(c, [ren.get(x, x) for x in qp.word_names(w)]) for w, c in r.terms.items()])
                for r in P.relations]
        g = ArrowGrading(q2, {ren.get(a, a): P.grading[a] for a in qp.arrow_names})
        moved = GradedPresentation(q2, rels, g)
        aligned = rename_arrows(target, q2)
        if same_ideal(moved, aligned, bound):
            return ren
    return None


def trivext(A):
    return trivial_extension(A)


def truncated_presentation(rng, max_vertices=3, max_arrows=4, length=3):
    """A random presentation made finite dimensional by killing all paths of ``length``."""
    from strategies import all_paths, random_presentation
    P = random_presentation(rng, max_vertices=max_vertices, max_arrows=max_arrows, max_relations=2)
    q = P.quiver
    kill = [q.element([(1, q.word_names(w))]) for w in all_paths(q, length)]
    return GradedPresentation(q, P.relations + kill, P.grading, P.field)


def truncated_algebra(rng, **kw):
    return ungraded(algebra_from_presentation(truncated_presentation(rng, **kw))[0])
