"""Hypothesis strategies and brute-force oracles shared by the test modules."""
import itertools

import flint
from hypothesis import strategies as st

from koszulfg.core import ArrowGrading, GradedPresentation, PathElement, Quiver
from koszulfg.field import QQ


@st.composite
def quivers(draw, max_vertices=4, max_arrows=5, min_arrows=1):
    nv = draw(st.integers(1, max_vertices))
    na = draw(st.integers(min_arrows, max_arrows))
    arrows = []
    for i in range(na):
        s = draw(st.integers(1, nv))
        t = draw(st.integers(1, nv))
        arrows.append((f"x{i}", s, t))
    return Quiver(list(range(1, nv + 1)), arrows)


def all_paths(q, length):
    """Every path of the given length, as words."""
    if length == 0:
        return [(-(v + 1),) for v in range(len(q.vertices))]
    layer = [(a,) for a in range(len(q.arrows))]
    for _ in range(length - 1):
        layer = [w + (a,) for w in layer for a in q.out_arrows[q.atgt[w[-1]]]]
    return layer


def paths_of_degree(q, degs, d, max_len=None):
    """Words whose arrow degrees (all >= 1) sum to ``d``."""
    out = [] if d else all_paths(q, 0)
    frontier = [(a,) for a in range(len(q.arrows)) if degs[a] <= d]
    while frontier:
        nxt = []
        for w in frontier:
            s = sum(degs[i] for i in w)
            if s == d:
                out.append(w)
            elif s < d:
                nxt.extend(w + (a,) for a in q.out_arrows[q.atgt[w[-1]]] if s + degs[a] <= d)
        frontier = nxt
    return out


def random_presentation(rng, max_vertices=4, max_arrows=5, max_relations=3, degrees=(1,)):
    """Random presentation with relations homogeneous for a positive grading."""
    nv = rng.randint(1, max_vertices)
    na = rng.randint(1, max_arrows)
    q = Quiver(list(range(1, nv + 1)),
               [(f"x{i}", rng.randint(1, nv), rng.randint(1, nv)) for i in range(na)])
    degs = [rng.choice(degrees) for _ in q.arrows]
    grading = ArrowGrading(q, dict(zip(q.arrow_names, degs)))
    rels = []
    for _ in range(rng.randint(0, max_relations)):
        d = rng.randint(2, 3)
        cands = [w for w in paths_of_degree(q, degs, d) if w[0] >= 0]
        if not cands:
            continue
        ends = sorted({(q.word_source(w), q.word_target(w)) for w in cands})
        s, t = rng.choice(ends)
        same = [w for w in cands if q.word_source(w) == s and q.word_target(w) == t]
        chosen = rng.sample(same, rng.randint(1, min(3, len(same))))
        terms = {w: QQ(rng.choice([-3, -2, -1, 1, 2, 3])) for w in chosen}
        rels.append(PathElement(q, terms, QQ))
    return GradedPresentation(q, rels, grading, QQ)


def graded_presentations(**kw):
    return st.randoms(use_true_random=False).map(lambda rng: random_presentation(rng, **kw))


def dense_quotient_dims(pres, bound, split=None):
    """Quotient dimensions per degree from the span of all translates ``u r v``.

    Uses flint dense matrices only, so it shares no code with the Gröbner engine.
    ``split`` maps a word to a block key for which the relations are
    homogeneous; ranks are then taken block by block, and the result is a dict
    ``{(degree, key): dim}``.
    """
    q = pres.quiver
    degs = pres.grading.by_index
    dims = [] if split is None else {}
    for d in range(bound + 1):
        basis = paths_of_degree(q, degs, d)
        index = {w: i for i, w in enumerate(basis)}
        rows = []
        for r in pres.relations:
            rd = pres.relation_degree(r)
            for du in range(d - rd + 1):
                dv = d - rd - du
                for u in paths_of_degree(q, degs, du):
                    for v in paths_of_degree(q, degs, dv):
                        row = [0] * len(basis)
                        nz = False
                        for w, c in r.terms.items():
                            x = q.compose_words(u, w)
                            x = None if x is None else q.compose_words(x, v)
                            if x is not None:
                                row[index[x]] += c
                                nz = True
                        if nz:
                            rows.append(row)
        if split is None:
            rank = flint.fmpq_mat(rows).rref()[1] if rows and basis else 0
            dims.append(len(basis) - rank)
            continue
        blocks = {}
        for i, w in enumerate(basis):
            blocks.setdefault(split(w), []).append(i)
        for key, cols in blocks.items():
            sub = [[row[i] for i in cols] for row in rows if any(row[i] for i in cols)]
            rank = flint.fmpq_mat(sub).rref()[1] if sub else 0
            dims[(d, key)] = len(cols) - rank
    return dims


def ideal_component_contains(pres, x, d):
    """Whether the homogeneous element ``x`` of degree ``d`` lies in the ideal (dense oracle)."""
    q = pres.quiver
    degs = pres.grading.by_index
    basis = paths_of_degree(q, degs, d)
    index = {w: i for i, w in enumerate(basis)}
    rows = []
    for r in pres.relations:
        rd = pres.relation_degree(r)
        for du in range(d - rd + 1):
            for u in paths_of_degree(q, degs, du):
                for v in paths_of_degree(q, degs, d - rd - du):
                    row = [0] * len(basis)
                    for w, c in r.terms.items():
                        y = q.compose_words(u, w)
                        y = None if y is None else q.compose_words(y, v)
                        if y is not None:
                            row[index[y]] += c
                    if any(row):
                        rows.append(row)
    target = [0] * len(basis)
    for w, c in x.terms.items():
        target[index[w]] += c
    if not any(target):
        return True
    if not rows:
        return False
    r0 = flint.fmpq_mat(rows).rref()[1]
    r1 = flint.fmpq_mat(rows + [target]).rref()[1]
    return r0 == r1


def all_words_up_to(q, n):
    return list(itertools.chain.from_iterable(all_paths(q, k) for k in range(n + 1)))
