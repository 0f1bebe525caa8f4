"""Constructions on algebras and extraction of quiver presentations.

* :func:`trivial_extension` builds ``A ⊕ DA`` with ``A`` in degree 0 and the
  dual in degree 1.
* :func:`gabriel_presentation` recovers a quiver with relations from a
  multiplication table.
* :func:`tensor_product`, :func:`quasi_veronese`, :func:`veronese`,
  :func:`degree_zero_part` and :func:`minimal_relation_degrees` complete the
  toolkit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import flint

from .algebra import FDAlgebra, algebra_from_presentation
from .core import ArrowGrading, GradedPresentation, PathElement, Quiver, word_length
from .errors import IncompletePresentationError, ParameterError, StructuralError
from .gb import MonomialOrder, degree_zero_normal_words, groebner
from .linalg import Echelon, add_scaled, kernel

__all__ = [
    "FDAlgebra", "GradedPresentation", "trivial_extension", "radical_basis",
    "gabriel_presentation", "tensor_product", "quasi_veronese", "veronese",
    "degree_zero_part", "minimal_relation_degrees", "RelationDegrees",
    "algebra_from_presentation",
]


# trivial extension

def trivial_extension(A: FDAlgebra) -> FDAlgebra:
    """``A ⊕ DA`` with ``(a, f)(b, g) = (ab, ag + fb)``; ``A`` in degree 0, ``DA`` in degree 1.

    With ``b_i*`` the dual basis and ``b_i b_j = sum c^k_ij b_k``:
    ``b_i · b_j* = sum_k c^j_ki b_k*`` and ``b_j* · b_i = sum_k c^j_ik b_k*``.
    """
    n = A.dim
    field = A.field
    table = [dict() for _ in range(2 * n)]
    for i in range(n):
        for j, prod in A.table[i].items():
            table[i][j] = dict(prod)
    # b_i * b_j^* and b_j^* * b_i
    for i in range(n):
        for k, row in enumerate(A.table):
            prod = row.get(i)       # b_k b_i
            if prod:
                for j, c in prod.items():
                    table[i].setdefault(n + j, {})[n + k] = c
        for k, prod in A.table[i].items():   # b_i b_k
            for j, c in prod.items():
                table[n + j].setdefault(i, {})[n + k] = c
    labels = list(A.labels) + ["d_" + lab for lab in A.labels]
    grading = [0] * n + [1] * n
    return FDAlgebra(labels, table, A.idempotents, field, grading, A.vertices, check=False)


# radical

def _local_character(A: FDAlgebra, corner_basis, x):
    """Scalar ``λ`` with ``L_x - λ`` nilpotent on a local corner algebra."""
    field = A.field
    ech = Echelon(field, track=True)
    for t, b in enumerate(corner_basis):
        ech.add(b, t)
    d = len(corner_basis)
    rows = []
    for b in corner_basis:
        co = ech.coordinates(A.mul(x, b))
        rows.append([int(co.get(t, 0)) for t in range(d)])
    p = field.characteristic
    M = flint.nmod_mat(d, d, [v for r in rows for v in r], p)
    power = p
    while power < d:
        power *= p
    P = M ** power
    return field(int(P[0, 0]))


def radical_basis(A: FDAlgebra) -> list[dict]:
    """Homogeneous basis of the Jacobson radical of a basic algebra.

    Characteristic 0 uses the trace form ``(x, y) -> tr L_{xy}``; prime fields
    use the characters of the local corners ``e_v A e_v`` (computed through a
    Frobenius power of the left multiplication), plus all off-diagonal corners.
    The result is checked to be a nilpotent ideal of codimension equal to the
    number of vertices.
    """
    field = A.field
    n = A.dim
    positive = [{i: field.one} for i in range(n) if A.degree(i) > 0]
    zero = A.component(0)
    if field.characteristic == 0:
        tr = []
        for k in range(n):
            t = field.zero
            for m, prod in A.table[k].items():
                c = prod.get(m)
                if c:
                    t += c
            tr.append(t)
        images = []
        for i in zero:
            col = {}
            for jj, j in enumerate(zero):
                prod = A.table[i].get(j)
                if prod:
                    s = field.zero
                    for k, c in prod.items():
                        s += c * tr[k]
                    if s:
                        col[jj] = s
            images.append(col)
        rad0 = [{zero[t]: c for t, c in v.items()} for v in kernel(images, field)]
    else:
        rad0 = []
        nv = len(A.idempotents)
        for v in range(nv):
            for w in range(nv):
                ech = Echelon(field)
                for i in zero:
                    ech.add(A.corner(v, w, {i: field.one}))
                corner = ech.fully_reduced()
                if v != w:
                    rad0.extend(corner)
                    continue
                e = A.idempotents[v]
                chars = [_local_character(A, corner, b) for b in corner]
                # kernel of the character, shifted by the unit e_v
                ech_e = Echelon(field, track=True)
                for t, b in enumerate(corner):
                    ech_e.add(b, t)
                co_e = ech_e.coordinates(e)
                lam_e = sum((c * chars[t] for t, c in co_e.items()), field.zero)
                if lam_e != 1:
                    raise StructuralError("corner algebra is not local with residue field k")
                for t, b in enumerate(corner):
                    x = dict(b)
                    add_scaled(x, e, -chars[t])
                    if x:
                        rad0.append(x)
    ech = Echelon(field)
    for x in rad0 + positive:
        ech.add(x)
    rad = sorted(ech.fully_reduced(), key=min)
    if len(rad) != n - len(A.idempotents):
        raise StructuralError(
            f"algebra is not basic: dim A/rad A = {n - len(rad)} but {len(A.idempotents)} idempotents")
    _check_nilpotent_ideal(A, rad)
    return rad


def _check_nilpotent_ideal(A, rad):
    field = A.field
    ech = Echelon(field)
    for x in rad:
        ech.add(x)
    for x in rad:
        for i in range(A.dim):
            b = {i: field.one}
            if not ech.contains(A.mul(x, b)) or not ech.contains(A.mul(b, x)):
                raise StructuralError("computed radical is not an ideal (algebra not basic?)")
    power = list(rad)
    for _ in range(A.dim + 1):
        if not power:
            return
        ech = Echelon(field)
        for x in power:
            for y in rad:
                ech.add(A.mul(x, y))
        nxt = ech.fully_reduced()
        if len(nxt) == len(power):
            raise StructuralError("radical is not nilpotent (algebra not basic?)")
        power = nxt


def _span_products(A, xs, ys):
    ech = Echelon(A.field)
    for x in xs:
        for y in ys:
            ech.add(A.mul(x, y))
    return ech


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def _arrow_name(label, used, k):
    name = re.sub(r"[^A-Za-z0-9_]", "", label.replace("*", ""))
    if not name or not name[0].isalpha() or name.startswith("e_") or not _IDENT.match(name):
        name = f"arr{k}"
    base, s = name, 1
    while name in used:
        s += 1
        name = f"{base}_{s}"
    used.add(name)
    return name


# Gabriel presentation

def gabriel_presentation(A: FDAlgebra, relation_degree_bound: int | None = None,
                         precedence=None) -> GradedPresentation:
    """Quiver with relations presenting a basic algebra given by its table.

    Arrows from ``v`` to ``w`` are a basis of ``e_v (rad/rad²) e_w`` chosen in
    reduced echelon form over the declared basis (homogeneous when ``A`` is
    graded).  Relations are minimal generators of the kernel of ``kQ -> A``;
    those longer than ``relation_degree_bound`` are dropped and the result is
    certified by comparing graded dimensions.  The returned presentation
    carries ``arrow_images`` (arrow name -> vector of ``A``) and
    ``source_algebra``.
    """
    field = A.field
    rad = radical_basis(A)
    rad2 = _span_products(A, rad, rad)
    nv = len(A.idempotents)
    degrees = A.degrees()
    arrows = []
    images = {}
    grade = {}
    used: set = set()
    k = 0
    for v in range(nv):
        for w in range(nv):
            for d in degrees:
                hom = [x for x in rad if A.degree(min(x)) == d]
                ech = Echelon(field)
                for x in hom:
                    ech.add(A.corner(v, w, x))
                space = sorted(ech.fully_reduced(), key=min)
                sub = Echelon(field)
                for row in rad2.rows:
                    if A.degree(min(row)) == d:
                        y = A.corner(v, w, row)
                        if y:
                            sub.add(y)
                for x in space:
                    if sub.add(x) is None:
                        label = A.labels[min(x)] if len(x) == 1 and x[min(x)] == 1 else ""
                        name = _arrow_name(label, used, k)
                        k += 1
                        arrows.append((name, A.vertices[v], A.vertices[w]))
                        images[name] = x
                        grade[name] = d
    quiver = Quiver(A.vertices, arrows)
    grading = ArrowGrading(quiver, grade)
    order = MonomialOrder(quiver, grading, precedence)
    gb_elements, normal = _kernel_basis(A, quiver, order, images)
    if len(normal) != A.dim:
        raise IncompletePresentationError(
            f"arrows generate a subalgebra of dimension {len(normal)} < {A.dim}", 0)
    full = GradedPresentation(quiver, gb_elements, grading, field)
    gens = _minimal_generators(full, gb_elements, max(len(w) for w in normal if w[0] >= 0) + 1
                               if any(w[0] >= 0 for w in normal) else 1, finite=True)
    if relation_degree_bound is not None:
        kept = [r for r in gens if r.max_length() <= relation_degree_bound]
    else:
        kept = gens
    pres = GradedPresentation(quiver, kept, grading, field)
    _certify(pres, A, normal)
    pres.arrow_images = images
    pres.source_algebra = A
    return pres


def _kernel_basis(A, quiver, order, images):
    """Reduced Gröbner basis of ``ker(kQ -> A)`` and the normal words, by linear algebra."""
    field = A.field
    ech = Echelon(field, track=True)
    nv = len(A.idempotents)
    value = {}
    normal_layer = []
    for v in range(nv):
        w = (-(v + 1),)
        value[w] = A.idempotents[v]
        if ech.add(A.idempotents[v], w) is not None:
            raise StructuralError("idempotents are linearly dependent")
        normal_layer.append(w)
    normal = list(normal_layer)
    normal_set = set(normal)
    arrow_vec = [images[a] for a in quiver.arrow_names]
    gb = []
    while normal_layer:
        cands = []
        for u in normal_layer:
            for a in quiver.out_arrows[quiver.word_target(u)]:
                x = (a,) if u[0] < 0 else u + (a,)
                if len(x) > 1 and x[1:] not in normal_set:
                    continue
                cands.append((x, u))
        cands.sort(key=lambda t: order.key(t[0]))
        layer = []
        for x, u in cands:
            val = A.mul(value[u], arrow_vec[x[-1]])
            dep = ech.add(val, x)
            if dep is None:
                value[x] = val
                layer.append(x)
                normal_set.add(x)
            else:
                gb.append(PathElement(quiver, dep, field))
        normal.extend(layer)
        normal_layer = layer
    return gb, normal


def _paths_from(quiver, v, max_len, _cache={}):
    key = (quiver, v, max_len)
    if key in _cache:
        return _cache[key]
    layer = [(-(v + 1),)]
    out = list(layer)
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for a in quiver.out_arrows[quiver.word_target(w)]:
                nxt.append((a,) if w[0] < 0 else w + (a,))
        out.extend(nxt)
        layer = nxt
    _cache[key] = out
    return out


def _minimal_generators(pres, candidates, top, finite):
    """Greedy minimal generators of the ideal among ``candidates`` (ascending leading words).

    Works modulo paths longer than ``top``.  For finite-dimensional quotients
    with all paths of length ``top`` in the ideal this computes
    ``I/(JI+IJ)`` exactly; for length-homogeneous ideals it is exact degree by
    degree.
    """
    q = pres.quiver
    field = pres.field
    gb = groebner(pres, top + 1 if finite else top)
    order = gb.order
    g = pres.grading
    cands = sorted(candidates, key=lambda r: order.key(order.leading(r.terms)))
    blocks = {}

    def block_key(w):
        return (q.word_source(w), q.word_target(w), g.word_degree(w))

    def in_ideal_basis(v, w, d, max_len):
        """Basis of I ∩ span(paths v->w of degree d and length <= max_len)."""
        out = []
        for p in _paths_from(q, v, max_len):
            if q.word_target(p) != w or g.word_degree(p) != d:
                continue
            nf = gb.nf_word(p)
            if nf.get(p) == field.one and len(nf) == 1:
                continue
            x = {p: field.one}
            add_scaled(x, nf, -field.one)
            out.append(x)
        return out

    def products_basis(key):
        if key in blocks:
            return blocks[key]
        v, w, d = key
        ech = Echelon(field)
        for a in range(len(q.arrows)):
            da = g.by_index[a]
            if da > d:
                continue
            if q.asrc[a] == v:
                for x in in_ideal_basis(q.atgt[a], w, d - da, top - 1):
                    y = {}
                    for t, c in x.items():
                        z = q.compose_words((a,), t)
                        if word_length(z) <= top:
                            y[z] = c
                    if y:
                        ech.add(y)
            if q.atgt[a] == w:
                for x in in_ideal_basis(v, q.asrc[a], d - da, top - 1):
                    y = {}
                    for t, c in x.items():
                        z = q.compose_words(t, (a,))
                        if word_length(z) <= top:
                            y[z] = c
                    if y:
                        ech.add(y)
        blocks[key] = ech
        return ech

    chosen = []
    for r in cands:
        if r.max_length() > top:
            continue
        lw = order.leading(r.terms)
        ech = products_basis(block_key(lw))
        if ech.add(dict(r.terms)) is None:
            chosen.append(r)
    return chosen


def _certify(pres, A, normal):
    """Compare per-degree normal-word counts of ``pres`` with the graded dimensions of ``A``."""
    top = max((len(w) for w in normal if w[0] >= 0), default=0) + 1
    gb = groebner(pres, max(top, pres.max_relation_length()))
    g = pres.grading
    layers = gb.normal_words(top)
    counts: dict = {}
    for layer in layers:
        for w in layer:
            counts[g.word_degree(w)] = counts.get(g.word_degree(w), 0) + 1
    want: dict = {}
    for i in range(A.dim):
        want[A.degree(i)] = want.get(A.degree(i), 0) + 1
    for d in sorted(set(counts) | set(want)):
        if counts.get(d, 0) != want.get(d, 0):
            raise IncompletePresentationError(
                f"presented algebra and input differ in degree {d}: "
                f"{counts.get(d, 0)} vs {want.get(d, 0)}", d)


# minimal relations

@dataclass
class RelationDegrees:
    lengths: list
    generators: list

    @property
    def is_quadratic(self):
        return all(n == 2 for n in self.lengths)


def minimal_relation_degrees(pres: GradedPresentation) -> RelationDegrees:
    """Path lengths of a minimal generating set of the relation ideal."""
    from .gb import quotient_dimension
    homogeneous_length = all(r.min_length() == r.max_length() for r in pres.relations)
    finite = False
    top = pres.max_relation_length()
    if not homogeneous_length:
        dim = quotient_dimension(pres)
        if dim is not None:
            finite = True
            alg, words, _ = algebra_from_presentation(pres)
            top = max((len(w) for w in words if w[0] >= 0), default=0) + 1
        else:
            top = top + 1
    gb = groebner(pres, top + 1)
    cands = [r for r in gb.elements() if r.max_length() <= top]
    gens = _minimal_generators(pres, cands, top, finite)
    return RelationDegrees(sorted(r.max_length() for r in gens), gens)


# tensor products, Veronese constructions, degree-0 parts

def tensor_product(A: GradedPresentation, B: GradedPresentation) -> GradedPresentation:
    """``kQ/I ⊗ kQ'/I'`` on the product quiver with commutativity squares."""
    if A.field != B.field:
        raise StructuralError("tensor factors over different fields")
    field = A.field
    qa, qb = A.quiver, B.quiver

    def vname(v, w):
        if len(qa.vertices) == 1 and len(qb.vertices) == 1:
            return v
        if len(qb.vertices) == 1:
            return v
        if len(qa.vertices) == 1:
            return w
        return f"{v}_{w}"

    def left(a, w):
        return a if len(qb.vertices) == 1 else f"{a}_v{w}"

    def right(v, b):
        return b if len(qa.vertices) == 1 else f"v{v}_{b}"

    vertices = [vname(v, w) for v in qa.vertices for w in qb.vertices]
    arrows = []
    grade = {}
    for w in qb.vertices:
        for a, s, t in qa.arrows:
            arrows.append((left(a, w), vname(s, w), vname(t, w)))
            grade[left(a, w)] = A.grading[a]
    for v in qa.vertices:
        for b, s, t in qb.arrows:
            arrows.append((right(v, b), vname(v, s), vname(v, t)))
            grade[right(v, b)] = B.grading[b]
    Q = Quiver(vertices, arrows)
    rels = []

    def lift(r, fix, on_left):
        d = {}
        for wd, c in r.terms.items():
            names = r.quiver.word_names(wd)
            if on_left:
                src = qa.vertices[qa.word_source(wd)]
                word = Q.word_of([left(a, fix) for a in names], vname(src, fix))
            else:
                src = qb.vertices[qb.word_source(wd)]
                word = Q.word_of([right(fix, b) for b in names], vname(fix, src))
            d[word] = c
        return PathElement(Q, d, field)

    for w in qb.vertices:
        for r in A.relations:
            rels.append(lift(r, w, True))
    for v in qa.vertices:
        for r in B.relations:
            rels.append(lift(r, v, False))
    for a, s, t in qa.arrows:
        for b, s2, t2 in qb.arrows:
            x = Q.word_of([left(a, s2), right(t, b)])
            y = Q.word_of([right(s, b), left(a, t2)])
            rels.append(PathElement(Q, {x: field.one, y: -field.one}, field))
    return GradedPresentation(Q, rels, ArrowGrading(Q, grade), field)


def _as_algebra(L):
    if isinstance(L, FDAlgebra):
        return L
    if isinstance(L, GradedPresentation):
        from .gb import quotient_dimension
        if quotient_dimension(L) is None:
            raise ParameterError("quasi-Veronese needs a finite-dimensional algebra")
        return algebra_from_presentation(L)[0]
    raise TypeError("expected an FDAlgebra or a GradedPresentation")


def quasi_veronese(L, a: int) -> FDAlgebra:
    """Smash product of ``L`` with its induced ``Z/a``-grading.

    Basis ``(x, i)`` with ``(x, i)(y, j) = δ_{j, i + deg x mod a} (xy, i)``
    and ``deg (x, i) = floor((i + deg x) / a)``.
    """
    if a < 1:
        raise ParameterError("a must be at least 1")
    A = _as_algebra(L)
    if A.grading is None:
        raise ParameterError("quasi-Veronese needs a graded algebra")
    if a == 1:
        return A
    n = A.dim
    field = A.field

    def idx(x, i):
        return i * n + x

    labels = [f"{lab}|{i}" for i in range(a) for lab in A.labels]
    table = [dict() for _ in range(a * n)]
    for i in range(a):
        for x in range(n):
            j = (i + A.degree(x)) % a
            for y, prod in A.table[x].items():
                table[idx(x, i)][idx(y, j)] = {idx(z, i): c for z, c in prod.items()}
    grading = [(i + A.degree(x)) // a for i in range(a) for x in range(n)]
    idem = [{idx(k, i): c for k, c in e.items()} for i in range(a) for e in A.idempotents]
    vertices = [f"{v}_{i}" for i in range(a) for v in A.vertices]
    return FDAlgebra(labels, table, idem, field, grading, vertices, check=False)


def veronese(A: FDAlgebra, ell: int) -> FDAlgebra:
    """The subalgebra of degrees divisible by ``ell``, regraded by ``deg/ell``."""
    if ell < 1:
        raise ParameterError("ell must be at least 1")
    keep = [i for i in range(A.dim) if A.degree(i) % ell == 0]
    pos = {i: t for t, i in enumerate(keep)}
    table = [dict() for _ in keep]
    for t, i in enumerate(keep):
        for j, prod in A.table[i].items():
            if j in pos:
                table[t][pos[j]] = {pos[k]: c for k, c in prod.items()}
    idem = [{pos[k]: c for k, c in e.items()} for e in A.idempotents]
    grading = [A.degree(i) // ell for i in keep]
    return FDAlgebra([A.labels[i] for i in keep], table, idem, A.field, grading, A.vertices,
                     check=False)


def degree_zero_part(L: GradedPresentation) -> FDAlgebra:
    """Multiplication table of the degree-0 subalgebra, on degree-0 normal words."""
    if isinstance(L, FDAlgebra):
        return veronese_zero(L)
    words, gb = degree_zero_normal_words(L)
    q = L.quiver
    index = {w: i for i, w in enumerate(words)}
    table = [dict() for _ in words]
    for i, u in enumerate(words):
        for j, w in enumerate(words):
            x = q.compose_words(u, w)
            if x is None:
                continue
            nf = gb.nf_word(x)
            if nf:
                table[i][j] = {index[y]: c for y, c in nf.items()}
    idem = [{index[(-(v + 1),)]: L.field.one} for v in range(len(q.vertices))]
    labels = [q.word_str(w) for w in words]
    return FDAlgebra(labels, table, idem, L.field, None, q.vertices, check=False)


def veronese_zero(A: FDAlgebra) -> FDAlgebra:
    keep = A.component(0)
    pos = {i: t for t, i in enumerate(keep)}
    table = [dict() for _ in keep]
    for t, i in enumerate(keep):
        for j, prod in A.table[i].items():
            if j in pos:
                table[t][pos[j]] = {pos[k]: c for k, c in prod.items()}
    idem = [{pos[k]: c for k, c in e.items()} for e in A.idempotents]
    return FDAlgebra([A.labels[i] for i in keep], table, idem, A.field, None, A.vertices,
                     check=False)
