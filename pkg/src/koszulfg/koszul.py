"""Bigraded Ext tables, graded nZ-orthogonality, Koszul duals and graded symmetry.

For a graded algebra ``Λ`` and a module ``T`` concentrated in degree 0 the
table ``Ext^i_{gr}(T, T<j>)`` is read off a minimal graded projective
resolution of ``T``: a cochain in ``Hom(P^i, T<j>)`` only sees the generators
of ``P^i`` sitting in degree ``j``.  The dual ``⊕_a Ext^{na}(T, T<a>)`` is
multiplied by Yoneda composition, computed by lifting cocycles to chain maps.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field as dc_field

from .algebra import FDAlgebra
from .core import GradedPresentation
from .errors import ParameterError, StructuralError
from .linalg import Echelon, add_scaled, kernel
from .modcplx import (AdaptedAlgebra, GradedAlgebraData, GradedModule, HomComplex,
                      ChainMapLift, ProjectiveResolution, adapt, degree_zero_module)

__all__ = [
    "BigradedExtTable", "graded_ext_table", "OrthogonalityVerdict", "orthogonality_check",
    "koszul_dual", "SymmetryVerdict", "graded_symmetric_check", "graded_algebra",
]


def graded_algebra(L) -> AdaptedAlgebra:
    """Adapted graded algebra from an :class:`FDAlgebra` or a finite-dimensional presentation."""
    if isinstance(L, AdaptedAlgebra):
        return L
    if isinstance(L, GradedPresentation):
        from .present import _as_algebra
        L = _as_algebra(L)
    if not isinstance(L, FDAlgebra):
        raise TypeError("expected a graded algebra")
    if L.grading is None:
        raise ParameterError("a grading is required")
    if min(L.degrees(), default=0) < 0:
        raise ParameterError("the grading must be nonnegative")
    return adapt(L)


@dataclass
class BigradedExtTable:
    """``dims[(i, j)] = dim Ext^i_gr(T, T<j>)`` for ``i <= i_bound`` (zero entries omitted)."""
    dims: dict
    i_bound: int
    algebra: AdaptedAlgebra
    T: GradedModule
    resolution: ProjectiveResolution
    homs: dict = dc_field(default_factory=dict)     # j -> HomComplex

    def __getitem__(self, key):
        return self.dims.get(key, 0)

    def support(self):
        return sorted(k for k, v in self.dims.items() if v)

    def row(self, i):
        return {j: d for (ii, j), d in sorted(self.dims.items()) if ii == i}

    def hom(self, j) -> HomComplex:
        h = self.homs.get(j)
        if h is None:
            h = HomComplex(self.resolution, self.T, j)
            self.homs[j] = h
        return h

    def to_json(self):
        return {"i_bound": self.i_bound,
                "entries": [[i, j, d] for (i, j), d in sorted(self.dims.items()) if d]}


def graded_ext_table(L, T: GradedModule | None = None, i_bound: int = 8) -> BigradedExtTable:
    """Dimensions of ``Ext^i_gr(T, T<j>)`` for ``0 <= i <= i_bound``; ``T`` defaults to ``Λ_0``."""
    alg = graded_algebra(L)
    if T is None:
        T = degree_zero_module(alg)
    if T.alg is not alg:
        raise ParameterError("T must be a module over the given algebra")
    if any(d != 0 for _, d in T.blocks):
        raise ParameterError("T must be concentrated in degree 0")
    res = ProjectiveResolution(T, i_bound + 1)
    tbl = BigradedExtTable({}, i_bound, alg, T, res)
    for i in range(min(i_bound, len(res.gens) - 1) + 1):
        for j in sorted({d for _, d in res.gens[i]}):
            dim = tbl.hom(j).dimension(i)
            if dim:
                tbl.dims[(i, j)] = dim
    return tbl


@dataclass
class OrthogonalityVerdict:
    orthogonal: bool
    n: int
    bound: int
    violation: tuple | None = None

    @property
    def verdict(self):
        if self.orthogonal:
            return "orthogonal-to-bound"
        return f"violation-at-{self.violation}"


def orthogonality_check(tbl: BigradedExtTable, n: int) -> OrthogonalityVerdict:
    """Scan for the first ``(i, j)`` with ``Ext^i(T, T<j>) != 0`` and ``i != n j``."""
    for (i, j) in sorted(tbl.dims):
        if tbl.dims[(i, j)] and i != n * j:
            return OrthogonalityVerdict(False, n, tbl.i_bound, (i, j))
    return OrthogonalityVerdict(True, n, tbl.i_bound)


def koszul_dual(L, T: GradedModule | None = None, n: int = 2, degree_bound: int = 6,
                table: BigradedExtTable | None = None, lift_cache: int = 512) -> GradedAlgebraData:
    """``Λ^! = ⊕_a Ext^{na}(T, T<a>)`` for ``a <= degree_bound`` with the Yoneda product.

    For ``x`` in degree ``a`` and ``y`` in degree ``b`` the product is
    ``(-1)^{na·nb} x ∘ η_y`` where ``η_y`` lifts the cocycle ``y`` to a chain
    map; so ``x * y`` first applies ``y`` and degree 0 is ``End(T)``.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    top = n * degree_bound
    if table is None or table.i_bound < top:
        table = graded_ext_table(L if table is None else table.algebra,
                                 None if table is None else table.T, top)
    verdict = orthogonality_check(table, n)
    if not verdict.orthogonal:
        i, j = verdict.violation
        raise StructuralError(f"T is not graded {n}Z-orthogonal: Ext^{i}(T, T<{j}>) != 0")
    res = table.resolution
    field = table.algebra.field
    reps = [table.hom(a).cohomology(n * a)[2] for a in range(degree_bound + 1)]
    dims = [len(r) for r in reps]
    nd = table.T.dim

    def cocycle(b, vec):
        phi: dict = {}
        for y, c in vec.items():
            add_scaled(phi, reps[b][y], c)
        return phi

    # lifts are large, so only the most recently used ones are kept
    @functools.lru_cache(maxsize=lift_cache)
    def _lift(b, items):
        vals = table.hom(b).split(cocycle(b, dict(items)))
        return ChainMapLift(res, n * b, res, lambda g: vals.get(g, {}))

    def lift(b, vec):
        return _lift(b, tuple(sorted(vec.items())))

    def multiply(a, x_vec, b, y_vec):
        if a + b > degree_bound:
            raise ParameterError(f"product lands in degree {a + b} beyond the window {degree_bound}")
        if not x_vec or not y_vec:
            return {}
        eta = lift(b, y_vec)[n * a]
        hx = table.hom(a)
        phi = cocycle(a, x_vec)
        vals = hx.split(phi)
        cochain: dict = {}
        for g, vec in eta.items():
            if vec:
                for m, c in hx.evaluate(phi, vec, vals).items():
                    cochain[g * nd + m] = c
        if (n * a * n * b) % 2:
            cochain = {k: -c for k, c in cochain.items()}
        if not cochain:
            return {}
        return table.hom(a + b).cohomology(n * (a + b))[3](cochain)

    def product(a, x, b, y):
        return multiply(a, {x: field.one}, b, {y: field.one})

    labels = [[f"e{a}_{t}" for t in range(d)] for a, d in enumerate(dims)]
    out = GradedAlgebraData(field, dims, product, labels, name="dual")
    out.mul = multiply
    out.ext_table = table
    out.orthogonality = verdict
    out.n = n
    # unit: the identity of T in degree 0
    if dims[0]:
        h0 = table.hom(0)
        ident: dict = {}
        for g, x in enumerate(res.aug):
            for m, c in x.items():
                ident[g * nd + m] = c
        out.unit = h0.cohomology(0)[3](ident)
    return out


# graded symmetry

@dataclass
class SymmetryVerdict:
    symmetric: bool
    a: int
    form: dict | None = None          # a symmetrising functional on Λ_a, if found
    caveat: str = ""

    def __bool__(self):
        return self.symmetric


def _gram(A: FDAlgebra, f: dict):
    """Gram matrix of the pairing ``(x, y) -> f(xy)``."""
    rows = {}
    for i in range(A.dim):
        for j, prod in A.table[i].items():
            s = sum((prod.get(k, 0) * c for k, c in f.items()), A.field.zero)
            if s:
                rows.setdefault(i, {})[j] = s
    return rows


def _nondegenerate(A, f) -> bool:
    G = _gram(A, f)
    rows = [G.get(i, {}) for i in range(A.dim)]
    ech = Echelon(A.field)
    for r in rows:
        if not r or ech.add(r) is not None:
            return False
    return True


def _simple_socles(A: FDAlgebra) -> bool:
    """Whether the projectives ``e_v Λ`` have simple socles at pairwise distinct vertices."""
    from .present import radical_basis
    rad = radical_basis(A)
    field = A.field
    targets = []
    for e in A.idempotents:
        span = Echelon(field)
        gens = []
        for k in range(A.dim):
            x = A.mul(e, {k: field.one})
            if x and span.add(x) is None:
                gens.append(x)
        images = []
        for x in gens:
            img = {}
            for t, r in enumerate(rad):
                for k, c in A.mul(x, r).items():
                    img[(t, k)] = c
            images.append(img)
        soc = kernel(images, field)
        if len(soc) != 1:
            return False
        z: dict = {}
        for t, c in soc[0].items():
            add_scaled(z, gens[t], c)
        for w, f in enumerate(A.idempotents):
            if A.mul(z, f):
                targets.append(w)
    # the socle vertices of a self-injective algebra form a permutation
    return sorted(targets) == list(range(len(A.idempotents)))


def graded_symmetric_check(A, tries: int = 24, seed: int = 0) -> SymmetryVerdict:
    """Decide whether ``Λ<-a> ≅ DΛ`` as graded bimodules, ``a`` the highest degree.

    Such isomorphisms correspond to functionals ``f`` on ``Λ_a`` with
    ``f(xy) = f(yx)`` whose pairing ``(x, y) -> f(xy)`` is nondegenerate.  The
    symmetric functionals form a linear space; nondegeneracy of a generic
    member is tested exactly (a single parameter needs no search).
    """
    from .present import _as_algebra
    A = _as_algebra(A) if not isinstance(A, FDAlgebra) else A
    if A.grading is None:
        raise ParameterError("a grading is required")
    field = A.field
    a = A.highest_degree()
    top = A.component(a)
    # unknowns: f(b_k) for b_k in Λ_a; equations f(b_i b_j - b_j b_i) = 0
    eqs = []
    for i in range(A.dim):
        for j in range(A.dim):
            if A.degree(i) + A.degree(j) != a:
                continue
            diff = dict(A.table[i].get(j, {}))
            add_scaled(diff, A.table[j].get(i, {}), -field.one)
            if diff:
                eqs.append(diff)
    pos = {k: t for t, k in enumerate(top)}
    # f is a kernel vector of the transpose system
    images = [dict() for _ in top]
    for e, eq in enumerate(eqs):
        for k, c in eq.items():
            if k in pos:
                images[pos[k]][e] = c
    basis = [{top[t]: c for t, c in v.items()} for v in kernel(images, field)]
    if not basis:
        return SymmetryVerdict(False, a)
    if not _simple_socles(A):
        # a symmetric algebra is self-injective
        return SymmetryVerdict(False, a)
    if len(basis) == 1:
        ok = _nondegenerate(A, basis[0])
        return SymmetryVerdict(ok, a, basis[0] if ok else None)
    rng = random.Random(seed)
    span = max(4 * A.dim, 100)
    for _ in range(tries):
        f: dict = {}
        for b in basis:
            add_scaled(f, b, field(rng.randint(-span, span)))
        if f and _nondegenerate(A, f):
            return SymmetryVerdict(True, a, f)
    # determinant of the pencil vanishes at every point tried
    caveat = f"no nondegenerate form among {tries} random members of a {len(basis)}-dimensional family"
    if field.characteristic:
        caveat += f" over GF({field.characteristic})"
    return SymmetryVerdict(False, a, None, caveat)
