"""Graded modules, projective resolutions, Nakayama functors and preprojective algebras.

Modules are right modules over a basic finite-dimensional algebra given by
structure constants.  A module basis is split into blocks ``(vertex, degree)``
(``M e_v`` in internal degree ``d``), and each algebra basis element acts by a
sparse matrix.  The shift convention is ``M<j>_i = M_{i-j}``: shifting by
``j`` moves every element up ``j`` degrees.

Projective modules are never materialised during a resolution.  A vector of
``P = ⊕_g g·Λ`` is a dict keyed by ``g * dim Λ + k`` (the element
``g · b_k``), which keeps kernels and lifts cheap.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field

from .algebra import FDAlgebra
from .errors import ParameterError, StructuralError
from .linalg import Echelon, add_scaled, kernel

__all__ = [
    "AdaptedAlgebra", "adapt", "GradedModule", "ProjectiveResolution", "HomComplex",
    "BoundedComplex", "ChainMapLift", "lift_chain_map", "projective_resolution", "nakayama",
    "InverseTranslation", "NRIVerdict", "n_rep_infinite_test", "preprojective",
    "GradedAlgebraData", "global_dimension",
]


# algebras on an adapted basis

class AdaptedAlgebra:
    """A basic algebra whose basis is adapted to its quiver.

    Every basis element lies in one corner ``e_v A e_w`` and one degree, the
    primitive idempotents are basis elements, and the remaining basis
    elements span the radical.  ``arrows`` indexes basis elements forming a
    basis of ``rad / rad²``.
    """

    def __init__(self, A: FDAlgebra):
        self.fd = A
        self.field = A.field
        self.dim = A.dim
        self.table = A.table
        self.nv = len(A.idempotents)
        self.vertices = A.vertices
        self.idem = []
        for e in A.idempotents:
            if len(e) != 1 or next(iter(e.values())) != 1:
                raise StructuralError("idempotents must be basis elements")
            self.idem.append(next(iter(e)))
        self.src = [None] * self.dim
        self.tgt = [None] * self.dim
        for k in range(self.dim):
            for v, i in enumerate(self.idem):
                if self.table[i].get(k) is not None:
                    self.src[k] = v
                if self.table[k].get(i) is not None:
                    self.tgt[k] = v
        self.deg = [A.degree(k) for k in range(self.dim)]
        self.corner = defaultdict(list)          # (v, w, d) -> basis indices
        self.out = defaultdict(list)             # v -> basis of e_v A
        for k in range(self.dim):
            self.corner[(self.src[k], self.tgt[k], self.deg[k])].append(k)
            self.out[self.src[k]].append(k)
        self.into = defaultdict(list)            # w -> basis of A e_w
        for k in range(self.dim):
            self.into[self.tgt[k]].append(k)
        idem_set = set(self.idem)
        self.radical = [k for k in range(self.dim) if k not in idem_set]
        ech = Echelon(self.field)
        for x in self.radical:
            for y in self.radical:
                p = self.table[x].get(y)
                if p:
                    ech.add(p)
        self.arrows = [k for k in self.radical if ech.add({k: self.field.one}) is None]
        self._op = None

    def __repr__(self):
        return f"AdaptedAlgebra(dim={self.dim}, vertices={list(self.vertices)})"

    def is_graded(self):
        return any(self.deg)

    def max_degree(self):
        return max(self.deg) if self.dim else 0

    def opposite(self) -> "AdaptedAlgebra":
        if self._op is None:
            op = AdaptedAlgebra(self.fd.opposite())
            op._op = self
            self._op = op
        return self._op

    def mul(self, x, y):
        return self.fd.mul(x, y)

    def cartan_matrix(self):
        """``C[v][w] = dim e_v A e_w``."""
        C = [[0] * self.nv for _ in range(self.nv)]
        for k in range(self.dim):
            C[self.src[k]][self.tgt[k]] += 1
        return C


def _is_adapted(A: FDAlgebra) -> bool:
    field = A.field
    idem = []
    for e in A.idempotents:
        if len(e) != 1 or next(iter(e.values())) != 1:
            return False
        idem.append(next(iter(e)))
    for k in range(A.dim):
        b = {k: field.one}
        hits = 0
        for v in range(len(idem)):
            for w in range(len(idem)):
                c = A.corner(v, w, b)
                if c == b:
                    hits += 1
                elif c:
                    return False
        if hits != 1:
            return False
    from .present import _check_nilpotent_ideal
    rad = [{k: field.one} for k in range(A.dim) if k not in set(idem)]
    try:
        _check_nilpotent_ideal(A, rad)
    except StructuralError:
        return False
    return True


def adapt(A) -> AdaptedAlgebra:
    """Adapted view of ``A`` (rebasing along the radical if needed); cached."""
    if isinstance(A, AdaptedAlgebra):
        return A
    cached = getattr(A, "_adapted", None)
    if cached is not None:
        return cached
    if _is_adapted(A):
        out = AdaptedAlgebra(A)
    else:
        out = AdaptedAlgebra(_rebase(A))
    A._adapted = out
    return out


def _rebase(A: FDAlgebra) -> FDAlgebra:
    from .present import radical_basis
    field = A.field
    rad = radical_basis(A)
    nv = len(A.idempotents)
    new = [dict(e) for e in A.idempotents]
    for v in range(nv):
        for w in range(nv):
            by_deg = defaultdict(list)
            for r in rad:
                c = A.corner(v, w, r)
                for d in sorted({A.degree(k) for k in c}):
                    part = {k: x for k, x in c.items() if A.degree(k) == d}
                    by_deg[d].append(part)
            for d in sorted(by_deg):
                ech = Echelon(field)
                for x in by_deg[d]:
                    ech.add(x)
                new.extend(ech.fully_reduced())
    if len(new) != A.dim:
        raise StructuralError("could not adapt the basis to the quiver")
    ech = Echelon(field, track=True)
    for t, x in enumerate(new):
        ech.add(x, t)
    table = [dict() for _ in new]
    for i, x in enumerate(new):
        for j, y in enumerate(new):
            p = A.mul(x, y)
            if p:
                table[i][j] = ech.coordinates(p)
    labels = []
    for x in new:
        if len(x) == 1 and next(iter(x.values())) == 1:
            labels.append(A.labels[next(iter(x))])
        else:
            labels.append(" + ".join(f"{field.to_str(c)}*{A.labels[k]}" for k, c in sorted(x.items())))
    grading = None
    if A.grading is not None:
        grading = [A.degree(min(x)) for x in new]
    idem = [{t: field.one} for t in range(nv)]
    out = FDAlgebra(labels, table, idem, field, grading, A.vertices, check=False)
    out.change_of_basis = new
    return out


def ungraded(A: FDAlgebra) -> FDAlgebra:
    if A.grading is None:
        return A
    return FDAlgebra(A.labels, A.table, A.idempotents, A.field, None, A.vertices, check=False)


# modules

def _transpose(mat: dict) -> dict:
    out: dict = {}
    for i, row in mat.items():
        for j, c in row.items():
            out.setdefault(j, {})[i] = c
    return out


class GradedModule:
    """Finite-dimensional graded right module.

    ``blocks[i] = (v, d)`` places basis vector ``i`` in ``M e_v`` in degree
    ``d``; ``action[k][i]`` is ``m_i · b_k`` as a sparse vector.
    """

    def __init__(self, alg: AdaptedAlgebra, blocks, action, name=None):
        self.alg = alg
        self.field = alg.field
        self.blocks = list(blocks)
        self.action = action
        self.name = name
        self.block_basis = defaultdict(list)
        for i, b in enumerate(self.blocks):
            self.block_basis[b].append(i)

    @property
    def dim(self):
        return len(self.blocks)

    def __repr__(self):
        return f"GradedModule(dim={self.dim}, dims={self.dimension_vector()})"

    def act(self, vec: dict, k: int) -> dict:
        out: dict = {}
        mat = self.action[k]
        for i, c in vec.items():
            row = mat.get(i)
            if row:
                add_scaled(out, row, c)
        return out

    def act_element(self, vec: dict, x: dict) -> dict:
        out: dict = {}
        for k, c in x.items():
            add_scaled(out, self.act(vec, k), c)
        return out

    def dimension_vector(self):
        dv = [0] * self.alg.nv
        for v, _ in self.blocks:
            dv[v] += 1
        return dv

    def graded_dimension_vectors(self):
        out: dict = {}
        for v, d in self.blocks:
            out.setdefault(d, [0] * self.alg.nv)[v] += 1
        return dict(sorted(out.items()))

    def degrees(self):
        return sorted({d for _, d in self.blocks})

    def shift(self, j: int) -> "GradedModule":
        return GradedModule(self.alg, [(v, d + j) for v, d in self.blocks], self.action, self.name)

    def dual(self) -> "GradedModule":
        """``DM`` as a right module over the opposite algebra, in degrees ``-d``."""
        op = self.alg.opposite()
        action = [_transpose(m) for m in self.action]
        return GradedModule(op, [(v, -d) for v, d in self.blocks], action,
                            f"D({self.name})" if self.name else None)

    def validate(self):
        """Check the module axioms on all basis elements."""
        alg = self.alg
        one = self.field.one
        for i, (v, d) in enumerate(self.blocks):
            m = {i: one}
            for w, e in enumerate(alg.idem):
                want = m if w == v else {}
                if self.act(m, e) != want:
                    raise StructuralError(f"idempotent e_{alg.vertices[w]} acts wrongly")
            for k in range(alg.dim):
                mk = self.act(m, k)
                for j in mk:
                    if self.blocks[j] != (alg.tgt[k], d + alg.deg[k]):
                        raise StructuralError("action does not respect the block grading")
                for l, prod in alg.table[k].items():
                    left = self.act(mk, l)
                    right = self.act_element(m, prod)
                    if left != right:
                        raise StructuralError("action is not associative")
                if alg.table[k]:
                    continue
        return True

    def is_homomorphism(self, other: "GradedModule", fmap: dict) -> bool:
        for i in range(self.dim):
            fi = fmap.get(i, {})
            for k in self.alg.arrows + self.alg.idem:
                lhs = _apply(fmap, self.act({i: self.field.one}, k))
                rhs = other.act(fi, k)
                if lhs != rhs:
                    return False
        return True


def _apply(fmap: dict, vec: dict) -> dict:
    out: dict = {}
    for i, c in vec.items():
        row = fmap.get(i)
        if row:
            add_scaled(out, row, c)
    return out


def free_module(alg: AdaptedAlgebra, gens, name=None):
    """``⊕_g e_{v_g} Λ <d_g>``; returns the module and the key of each basis vector."""
    keys = []
    blocks = []
    for g, (v, s) in enumerate(gens):
        for k in alg.out[v]:
            keys.append((g, k))
            blocks.append((alg.tgt[k], s + alg.deg[k]))
    pos = {key: i for i, key in enumerate(keys)}
    action = [dict() for _ in range(alg.dim)]
    for i, (g, k) in enumerate(keys):
        for l, prod in alg.table[k].items():
            action[l][i] = {pos[(g, m)]: c for m, c in prod.items()}
    return GradedModule(alg, blocks, action, name), keys


def projective_module(alg: AdaptedAlgebra, v: int, shift: int = 0) -> GradedModule:
    return free_module(alg, [(v, shift)], f"P{alg.vertices[v]}")[0]


def injective_module(alg: AdaptedAlgebra, v: int, shift: int = 0) -> GradedModule:
    """``D(Λ e_v)`` shifted by ``shift``."""
    op = alg.opposite()
    M = projective_module(op, v).dual().shift(shift)
    M.name = f"I{alg.vertices[v]}"
    return M


def regular_module(alg: AdaptedAlgebra) -> GradedModule:
    """``Λ_Λ`` with basis vector ``k`` equal to ``b_k``."""
    blocks = [(alg.tgt[k], alg.deg[k]) for k in range(alg.dim)]
    action = [dict() for _ in range(alg.dim)]
    for k in range(alg.dim):
        for l, prod in alg.table[k].items():
            action[l][k] = dict(prod)
    return GradedModule(alg, blocks, action, "A")


def dual_regular_module(alg: AdaptedAlgebra) -> GradedModule:
    """``DΛ`` as a right module; basis vector ``k`` is the dual basis element ``b_k*``."""
    M = regular_module(alg.opposite()).dual()
    M.alg = alg
    M.name = "DA"
    return M


def left_action_on_dual(alg: AdaptedAlgebra, k: int) -> dict:
    """Matrix of ``f -> b_k · f`` on ``DΛ`` (dual basis coordinates)."""
    out: dict = {}
    # (b_k f)(x) = f(x b_k):  b_k · b_j* = sum_m c^j_{m,k} b_m*
    for m, row in enumerate(alg.table):
        prod = row.get(k)
        if prod:
            for j, c in prod.items():
                out.setdefault(j, {})[m] = c
    return out


def simple_module(alg: AdaptedAlgebra, v: int, degree: int = 0) -> GradedModule:
    action = [dict() for _ in range(alg.dim)]
    action[alg.idem[v]][0] = {0: alg.field.one}
    return GradedModule(alg, [(v, degree)], action, f"S{alg.vertices[v]}")


def degree_zero_module(alg: AdaptedAlgebra) -> GradedModule:
    """``Λ_0 = Λ / Λ_{≥1}`` as a graded right ``Λ``-module."""
    keep = [k for k in range(alg.dim) if alg.deg[k] == 0]
    pos = {k: i for i, k in enumerate(keep)}
    action = [dict() for _ in range(alg.dim)]
    for k in keep:
        for l, prod in alg.table[k].items():
            if alg.deg[l] == 0:
                action[l][pos[k]] = {pos[m]: c for m, c in prod.items()}
    return GradedModule(alg, [(alg.tgt[k], 0) for k in keep], action, "T")


def subquotient(M: GradedModule, Z, B, name=None):
    """``Z / B`` for block-homogeneous submodules given by spanning vectors.

    Returns ``(module, reduce)`` where ``reduce(z)`` gives the coordinates of
    an element of ``Z`` modulo ``B``.
    """
    field = M.field

    def block_of(vec):
        b = {M.blocks[i] for i in vec}
        if len(b) != 1:
            raise StructuralError("subquotient vectors must be block homogeneous")
        return b.pop()

    zb, bb = defaultdict(list), defaultdict(list)
    for z in Z:
        if z:
            zb[block_of(z)].append(z)
    for x in B:
        if x:
            bb[block_of(x)].append(x)
    echs = {}
    reps = []
    blocks = []
    for blk in sorted(zb):
        ech = Echelon(field, track=True)
        for t, x in enumerate(bb.get(blk, [])):
            ech.add(x, ("b", t))
        for z in zb[blk]:
            if ech.add(z, ("r", len(reps))) is None:
                reps.append(z)
                blocks.append(blk)
        echs[blk] = ech

    def reduce(z):
        out = {}
        if not z:
            return out
        blk = block_of(z)
        ech = echs.get(blk)
        if ech is None:
            raise StructuralError("vector outside the subquotient")
        co = ech.coordinates(z)
        if co is None:
            raise StructuralError("vector outside the subquotient")
        for lab, c in co.items():
            if lab[0] == "r" and c:
                out[lab[1]] = c
        return out

    action = [dict() for _ in range(M.alg.dim)]
    for t, r in enumerate(reps):
        for k in range(M.alg.dim):
            img = M.act(r, k)
            if img:
                red = reduce(img)
                if red:
                    action[k][t] = red
    return GradedModule(M.alg, blocks, action, name), reduce, reps


# projective resolutions

def _top_generators(alg, block_vectors: dict, mult):
    """Vectors completing ``span(K·rad)`` to ``K`` in each block (``K`` given per block)."""
    field = alg.field
    radical = defaultdict(list)
    for (w, d), vecs in block_vectors.items():
        for a in alg.arrows:
            if alg.src[a] != w:
                continue
            tb = (alg.tgt[a], d + alg.deg[a])
            for x in vecs:
                y = mult(x, a)
                if y:
                    radical[tb].append(y)
    gens = []
    for blk in sorted(block_vectors):
        ech = Echelon(field)
        for y in radical.get(blk, []):
            ech.add(y)
        for x in block_vectors[blk]:
            if ech.add(x) is None:
                gens.append((blk, x))
    return gens


class ProjectiveResolution:
    """Minimal graded projective resolution ``... -> P^1 -> P^0 -> M``.

    ``gens[s]`` lists the generators ``(v, d)`` of ``P^s``; ``diff[s][g]`` is
    the image in ``P^{s-1}`` of generator ``g`` of ``P^s``; ``aug[g]`` its
    image in ``M`` for ``s = 0``.  Exactness holds by construction (each
    ``P^{s+1}`` covers the kernel of ``P^s -> P^{s-1}``) and minimality by
    choosing generators outside ``K·rad``.
    """

    def __init__(self, module: GradedModule, steps: int = 0):
        self.module = module
        self.alg = module.alg
        self.N = self.alg.dim
        self.gens: list[list] = []
        self.diff: list = [None]
        self.aug: list = []
        self._solvers: dict = {}
        self._blocks: dict = {}
        self.length = None            # index of the last nonzero term, once known
        gens = _top_generators(self.alg, {b: [{i: self.field.one} for i in idx]
                                          for b, idx in module.block_basis.items()},
                               module.act)
        self.gens.append([blk for blk, _ in gens])
        self.aug = [x for _, x in gens]
        self.extend(steps)

    @property
    def field(self):
        return self.module.field

    def __len__(self):
        return len(self.gens)

    def rank(self, s):
        return len(self.gens[s]) if s < len(self.gens) else 0

    def generator_degrees(self, s):
        return sorted(d for _, d in self.gens[s]) if s < len(self.gens) else []

    # P^s as a vector space

    def block_keys(self, s, blk):
        w, d = blk
        N = self.N
        corner = self.alg.corner
        keys = []
        for g, (v, dg) in enumerate(self.gens[s]):
            for k in corner.get((v, w, d - dg), ()):
                keys.append(g * N + k)
        return keys

    def blocks(self, s):
        hit = self._blocks.get(s)
        if hit is None:
            out = set()
            for v, dg in self.gens[s]:
                for k in self.alg.out[v]:
                    out.add((self.alg.tgt[k], dg + self.alg.deg[k]))
            hit = self._blocks[s] = sorted(out)
        return hit

    def dimension(self, s):
        if s >= len(self.gens):
            return 0
        return sum(len(self.alg.out[v]) for v, _ in self.gens[s])

    def right_mult(self, vec: dict, l: int) -> dict:
        N = self.N
        table = self.alg.table
        out: dict = {}
        for key, c in vec.items():
            g, k = divmod(key, N)
            prod = table[k].get(l)
            if prod:
                base = g * N
                for m, c2 in prod.items():
                    t = base + m
                    x = out.get(t)
                    if x is None:
                        out[t] = c * c2
                    else:
                        x = x + c * c2
                        if x:
                            out[t] = x
                        else:
                            del out[t]
        return out

    def image(self, s, key) -> dict:
        """``∂_s(g · b_k)`` in ``P^{s-1}`` (or ``M`` for ``s = 0``)."""
        g, k = divmod(key, self.N)
        if s == 0:
            return self.module.act(self.aug[g], k)
        return self.right_mult(self.diff[s][g], k)

    def apply_differential(self, s, vec: dict) -> dict:
        out: dict = {}
        for key, c in vec.items():
            add_scaled(out, self.image(s, key), c)
        return out

    def _solver(self, s, blk):
        """Tracked echelon of the images of the ``blk`` block of ``P^s``."""
        key = (s, blk)
        hit = self._solvers.get(key)
        if hit is None:
            keys = self.block_keys(s, blk)
            ech = Echelon(self.field, track=True)
            kern = []
            for key_ in keys:
                dep = ech.add(self.image(s, key_), key_)
                if dep is not None:
                    kern.append(dep)
            hit = (ech, kern)
            self._solvers[key] = hit
        return hit

    def kernel(self, s) -> dict:
        """Kernel of ``∂_s`` by block (vectors in ``P^s`` keys)."""
        out = {}
        for blk in self.blocks(s):
            kern = self._solver(s, blk)[1]
            if kern:
                out[blk] = kern
        return out

    def preimage(self, s, y: dict):
        """Some ``x`` in ``P^s`` with ``∂_s x = y`` (``y`` block homogeneous), or ``None``."""
        if not y:
            return {}
        if s >= len(self.gens):
            return None
        blk = self._block_of_target(s, y)
        ech, _ = self._solver(s, blk)
        co = ech.coordinates(y)
        return co

    def _block_of_target(self, s, y):
        key = next(iter(y))
        if s == 0:
            return self.module.blocks[key]
        g, k = divmod(key, self.N)
        _, dg = self.gens[s - 1][g]
        return (self.alg.tgt[k], dg + self.alg.deg[k])

    def block_of(self, s, key):
        g, k = divmod(key, self.N)
        _, dg = self.gens[s][g]
        return (self.alg.tgt[k], dg + self.alg.deg[k])

    def extend(self, steps: int):
        """Compute terms up to ``P^steps`` (fewer if the resolution terminates)."""
        while len(self.gens) <= steps and self.length is None:
            s = len(self.gens) - 1
            kern = self.kernel(s)
            if not kern:
                self.length = s
                break
            gens = _top_generators(self.alg, kern, self.right_mult)
            self.gens.append([blk for blk, _ in gens])
            self.diff.append([x for _, x in gens])
        return self

    def projective_dimension(self, bound: int):
        """``pd M`` if it is at most ``bound``, else ``None``."""
        self.extend(bound + 1)
        if self.length is not None and self.length <= bound:
            return self.length
        return None

    def is_exact(self, upto=None) -> bool:
        """Rank check: ``dim P^s = rank ∂_s + rank ∂_{s+1}`` blockwise, and ``∂_0`` onto ``M``."""
        upto = len(self.gens) - 1 if upto is None else upto
        top = upto if self.length is None else min(upto, self.length)
        for blk, idx in self.module.block_basis.items():
            ech, _ = self._solver(0, blk)
            if ech.rank != len(idx):
                return False
        for s in range(top + 1):
            nxt_ok = s + 1 < len(self.gens) or self.length is not None
            if not nxt_ok:
                break
            for blk in self.blocks(s):
                dim = len(self.block_keys(s, blk))
                r = self._solver(s, blk)[0].rank
                r_next = self._solver(s + 1, blk)[0].rank if s + 1 < len(self.gens) else 0
                if dim != r + r_next:
                    return False
                # differentials compose to zero
            if s >= 1:
                for g in range(len(self.gens[s])):
                    if self.apply_differential(s - 1, self.diff[s][g]):
                        return False
        return True

    def term(self, s) -> GradedModule:
        """``P^s`` as an explicit module (basis in key order)."""
        return free_module(self.alg, self.gens[s] if s < len(self.gens) else [])[0]


def projective_resolution(X, steps: int) -> "ProjectiveResolution":
    if isinstance(X, BoundedComplex):
        only = [i for i, M in X.terms.items() if M.dim]
        if len(only) > 1:
            raise ParameterError("resolutions of complexes with several nonzero terms are not supported")
        if not only:
            return ProjectiveResolution(GradedModule(X.alg, [], [dict() for _ in range(X.alg.dim)]), steps)
        X = X.terms[only[0]]
    return ProjectiveResolution(X, steps)


def global_dimension(alg: AdaptedAlgebra, bound: int):
    """``gldim`` (max projective dimension of the simples) if at most ``bound``, else ``None``."""
    worst = 0
    for v in range(alg.nv):
        pd = ProjectiveResolution(simple_module(alg, v), 0).projective_dimension(bound)
        if pd is None:
            return None
        worst = max(worst, pd)
    return worst


# Hom complexes and lifting

class HomComplex:
    """``Hom_gr(P^•, N<j>)``; a cochain assigns to each generator ``g`` of ``P^i``
    a vector of ``N`` in block ``(v_g, d_g - j)``.  Cochain coordinates are
    indexed by ``g * dim N + n``."""

    def __init__(self, res: ProjectiveResolution, N: GradedModule, j: int = 0):
        self.res = res
        self.N = N
        self.j = j
        self._basis: dict = {}
        self._delta: dict = {}
        self._coh: dict = {}

    def basis(self, i):
        hit = self._basis.get(i)
        if hit is None:
            hit = []
            if i < len(self.res.gens):
                nd = self.N.dim
                for g, (v, d) in enumerate(self.res.gens[i]):
                    for n in self.N.block_basis.get((v, d - self.j), ()):
                        hit.append(g * nd + n)
            self._basis[i] = hit
        return hit

    def split(self, phi: dict) -> dict:
        """Values of a cochain per generator: ``g -> vector of N``."""
        nd = self.N.dim
        vals: dict = {}
        for key, c in phi.items():
            g, n = divmod(key, nd)
            vals.setdefault(g, {})[n] = c
        return vals

    def value(self, phi: dict, g: int) -> dict:
        nd = self.N.dim
        lo = g * nd
        return {key - lo: c for key, c in phi.items() if lo <= key < lo + nd}

    def evaluate(self, phi: dict, vec: dict, vals: dict | None = None) -> dict:
        """``φ(x)`` for ``x`` in ``P^i`` (keys ``g * dim Λ + k``); ``vals`` is ``split(φ)``."""
        N = self.res.N
        if vals is None:
            vals = self.split(phi)
        out: dict = {}
        for key, c in vec.items():
            g, k = divmod(key, N)
            val = vals.get(g)
            if val:
                add_scaled(out, self.N.act(val, k), c)
        return out

    def delta(self, i):
        """Images of the basis cochains of ``C^i`` in ``C^{i+1}``."""
        hit = self._delta.get(i)
        if hit is not None:
            return hit
        self.res.extend(i + 1)
        nd = self.N.dim
        N = self.res.N
        basis = self.basis(i)
        pos = {key: t for t, key in enumerate(basis)}
        images = [dict() for _ in basis]
        if i + 1 < len(self.res.gens):
            for g, dg in enumerate(self.res.diff[i + 1]):
                for key, c in dg.items():
                    gp, k = divmod(key, N)
                    v, d = self.res.gens[i][gp]
                    for n in self.N.block_basis.get((v, d - self.j), ()):
                        img = self.N.act({n: c}, k)
                        if img:
                            target = images[pos[gp * nd + n]]
                            add_scaled(target, {g * nd + m: x for m, x in img.items()}, self.N.field.one)
        self._delta[i] = images
        return images

    def apply_delta(self, i, phi: dict) -> dict:
        basis_pos = {key: t for t, key in enumerate(self.basis(i))}
        images = self.delta(i)
        out: dict = {}
        for key, c in phi.items():
            add_scaled(out, images[basis_pos[key]], c)
        return out

    def cohomology(self, i):
        """``(cocycle basis, coboundary basis, representatives, reduce)`` in degree ``i``."""
        hit = self._coh.get(i)
        if hit is not None:
            return hit
        field = self.N.field
        basis = self.basis(i)
        zs = [{basis[t]: c for t, c in v.items()} for v in kernel(self.delta(i), field)]
        bs = []
        if i >= 1:
            ech = Echelon(field)
            for img in self.delta(i - 1):
                if img and ech.add(img) is None:
                    bs.append(img)
        ech = Echelon(field, track=True)
        for t, b in enumerate(bs):
            ech.add(b, ("b", t))
        reps = []
        for z in zs:
            if ech.add(z, ("r", len(reps))) is None:
                reps.append(z)

        def reduce(z):
            co = ech.coordinates(z)
            if co is None:
                raise StructuralError("not a cocycle")
            return {lab[1]: c for lab, c in co.items() if lab[0] == "r" and c}

        hit = (zs, bs, reps, reduce)
        self._coh[i] = hit
        return hit

    def dimension(self, i) -> int:
        return len(self.cohomology(i)[2])


class ChainMapLift:
    """Incremental lift ``η_s : P_src^{q+s} -> P_tgt^s`` of a map ``P_src^q -> N``.

    ``base(g)`` is the required image in the target module ``N`` of generator
    ``g`` of ``P_src^q`` (so ``aug ∘ η_0 = base``); later components satisfy
    ``∂ η_{s+1} = sign · η_s ∂``.  The internal degree shift is implicit in
    the blocks of ``base``.  ``maps[s]`` is a dict ``g -> vector``.
    """

    def __init__(self, src: ProjectiveResolution, q: int, tgt: ProjectiveResolution, base,
                 sign=1):
        self.src, self.q, self.tgt, self.sign = src, q, tgt, sign
        src.extend(q)
        level = {}
        for g in range(len(src.gens[q]) if q < len(src.gens) else 0):
            y = base(g)
            x = tgt.preimage(0, y)
            if x is None:
                raise StructuralError("base map does not factor through the augmentation")
            level[g] = x
        self.maps = [level]

    def __getitem__(self, s):
        self.extend(s)
        return self.maps[s]

    def extend(self, steps: int):
        src, tgt, q = self.src, self.tgt, self.q
        if len(self.maps) > steps:
            return self
        src.extend(q + steps)
        tgt.extend(steps)
        while len(self.maps) <= steps:
            s = len(self.maps) - 1
            if q + s + 1 >= len(src.gens):
                self.maps.append({})
                continue
            prev = self.maps[-1]
            level = {}
            for g, dg in enumerate(src.diff[q + s + 1]):
                y: dict = {}
                for key, c in dg.items():
                    gp, k = divmod(key, src.N)
                    val = prev.get(gp)
                    if val:
                        add_scaled(y, tgt.right_mult(val, k), c if self.sign == 1 else -c)
                if not y:
                    level[g] = {}
                    continue
                x = tgt.preimage(s + 1, y)
                if x is None:
                    raise StructuralError("lifting failed: target not exact")
                level[g] = x
            self.maps.append(level)
        return self


def lift_chain_map(src: ProjectiveResolution, q: int, tgt: ProjectiveResolution, base,
                   shift: int, steps: int, sign=1):
    """Components ``η_0..η_steps`` of the lift of ``base`` (see :class:`ChainMapLift`).

    ``shift`` is the internal degree shift of the map, recorded for callers;
    the computation reads it off the blocks of ``base``.
    """
    return ChainMapLift(src, q, tgt, base, sign).extend(steps).maps


# bounded complexes

class BoundedComplex:
    """Complex of graded modules ``X^i`` (cohomological indexing) with differentials
    ``d^i : X^i -> X^{i+1}`` stored as basis-image dicts."""

    def __init__(self, alg: AdaptedAlgebra, terms: dict, diffs: dict, check=True):
        self.alg = alg
        self.terms = {i: M for i, M in terms.items()}
        self.diffs = {i: d for i, d in diffs.items()}
        if check:
            self.check()

    @classmethod
    def from_module(cls, M: GradedModule, degree: int = 0):
        return cls(M.alg, {degree: M}, {})

    def window(self):
        idx = [i for i, M in self.terms.items() if M.dim]
        return (min(idx), max(idx)) if idx else (0, -1)

    def term(self, i) -> GradedModule:
        M = self.terms.get(i)
        if M is None:
            return GradedModule(self.alg, [], [dict() for _ in range(self.alg.dim)])
        return M

    def shift(self, k: int) -> "BoundedComplex":
        """``X[k]``: ``X[k]^i = X^{i+k}``, differential multiplied by ``(-1)^k``."""
        sgn = -1 if k % 2 else 1
        terms = {i - k: M for i, M in self.terms.items()}
        diffs = {i - k: {a: {b: sgn * c for b, c in row.items()} for a, row in d.items()}
                 for i, d in self.diffs.items()}
        return BoundedComplex(self.alg, terms, diffs, check=False)

    def check(self):
        """``d² = 0`` and every differential is a module homomorphism."""
        for i, d in self.diffs.items():
            if not self.term(i).is_homomorphism(self.term(i + 1), d):
                raise StructuralError(f"differential d^{i} is not a module map")
            nxt = self.diffs.get(i + 1)
            if nxt:
                for a in range(self.term(i).dim):
                    if _apply(nxt, d.get(a, {})):
                        raise StructuralError(f"d^{i+1} d^{i} != 0")
        return True

    def homology(self, i) -> GradedModule:
        X = self.term(i)
        field = X.field
        d = self.diffs.get(i, {})
        # cycles blockwise
        Z = []
        for blk, idx in X.block_basis.items():
            for v in kernel([d.get(a, {}) for a in idx], field):
                Z.append({idx[t]: c for t, c in v.items()})
        prev = self.diffs.get(i - 1, {})
        B = [img for img in prev.values() if img]
        H, _, _ = subquotient(X, Z, _split_blocks(X, B))
        return H

    def homology_dimensions(self):
        lo, hi = self.window()
        return {i: self.homology(i).dimension_vector() for i in range(lo, hi + 1)}

    def dual(self) -> "BoundedComplex":
        """``D X`` over the opposite algebra: ``(DX)^i = D(X^{-i})``, ``d = (d^{-i-1})^T``."""
        op = self.alg.opposite()
        terms = {-i: M.dual() for i, M in self.terms.items()}
        diffs = {-i - 1: _transpose(d) for i, d in self.diffs.items()}
        return BoundedComplex(op, terms, diffs, check=False)


def _split_blocks(M: GradedModule, vecs):
    out = []
    for v in vecs:
        parts = defaultdict(dict)
        for i, c in v.items():
            parts[M.blocks[i]][i] = c
        out.extend(parts.values())
    return out


# Nakayama functors

def _nakayama_projective_complex(res: ProjectiveResolution, length: int) -> BoundedComplex:
    """Apply ``- ⊗ DΛ`` to ``P^length -> ... -> P^0`` (``P^s`` in degree ``-s``)."""
    alg = res.alg
    op = alg.opposite()
    terms, keys = {}, {}
    for s in range(length + 1):
        # e_v DΛ = D(Λ e_v): injective at v, shifted by the generator degree
        blocks, ks, action = [], [], [dict() for _ in range(alg.dim)]
        for g, (v, dg) in enumerate(res.gens[s]):
            I = injective_module(alg, v, dg)
            base = len(blocks)
            for i, b in enumerate(I.blocks):
                blocks.append(b)
                ks.append((g, op.out[v][i]))
            for k in range(alg.dim):
                for i, row in I.action[k].items():
                    action[k][base + i] = {base + j: c for j, c in row.items()}
        terms[-s] = GradedModule(alg, blocks, action, f"nu(P^{s})")
        keys[-s] = {key: i for i, key in enumerate(ks)}
    diffs = {}
    for s in range(1, length + 1):
        # g ⊗ f -> sum c g' ⊗ (b_k f)
        d = {}
        src_keys, tgt_keys = keys[-s], keys[-s + 1]
        for (g, m), i in src_keys.items():
            img: dict = {}
            for key, c in res.diff[s][g].items():
                gp, k = divmod(key, res.N)
                for mm, c2 in left_action_on_dual(alg, k).get(m, {}).items():
                    t = tgt_keys.get((gp, mm))
                    if t is not None:
                        add_scaled(img, {t: c2}, c)
            if img:
                d[i] = img
        diffs[-s] = d
    return BoundedComplex(alg, terms, diffs, check=False)


def nakayama(X, direction: str = "forward", max_steps: int = 32) -> BoundedComplex:
    """Derived Nakayama functor ``ν = - ⊗^L DΛ`` or its inverse ``RHom(DΛ, -)``.

    ``X`` is a module or a complex with a single nonzero term.  The forward
    functor resolves by projectives; the inverse uses ``ν^{-1} = D ν_{op} D``.
    Raises :class:`StructuralError` when the resolution does not terminate
    within ``max_steps`` (infinite global dimension within the window).
    """
    if isinstance(X, GradedModule):
        X = BoundedComplex.from_module(X)
    lo, hi = X.window()
    if lo > hi:
        return X
    if lo != hi:
        raise ParameterError("nakayama supports complexes with a single nonzero term")
    if direction == "inverse":
        return nakayama(X.dual(), "forward", max_steps).dual()
    if direction != "forward":
        raise ParameterError("direction must be 'forward' or 'inverse'")
    M = X.terms[lo]
    res = ProjectiveResolution(M, 0)
    pd = res.projective_dimension(max_steps)
    if pd is None:
        raise StructuralError(f"projective resolution does not terminate within {max_steps} steps")
    out = _nakayama_projective_complex(res, pd)
    return out.shift(-lo)


# the inverse higher Auslander-Reiten translation and preprojective algebras

@dataclass
class TranslateStep:
    module: GradedModule
    hom: HomComplex
    reduce: object
    reps: list
    lower: dict                        # m -> dimension vector of Ext^m(DA, M), m < n


class InverseTranslation:
    """``τ_n^- = Ext^n_A(DA, -)`` on right modules over an ungraded algebra.

    ``Ext^m(DA, M)`` is the cohomology of ``Hom(Q^•, M)`` for a projective
    resolution ``Q^•`` of ``DA``; its right module structure comes from chain
    lifts of the left multiplications of ``A`` on ``DA``.
    """

    def __init__(self, alg: AdaptedAlgebra, n: int):
        if alg.is_graded():
            raise ParameterError("the inverse translation is computed over an ungraded algebra")
        self.alg = alg
        self.n = n
        self.DA = dual_regular_module(alg)
        self.res = ProjectiveResolution(self.DA, n + 1)
        if self.res.projective_dimension(n) is None:
            raise StructuralError(f"pd DA > {n}")
        self.lifts = []
        for k in range(alg.dim):
            L = left_action_on_dual(alg, k)
            maps = lift_chain_map(self.res, 0, self.res,
                                  lambda g, L=L: _apply(L, self.res.aug[g]), 0, n)
            self.lifts.append(maps[n] if n < len(maps) else {})

    def ext(self, M: GradedModule, m: int) -> int:
        return HomComplex(self.res, M, 0).dimension(m)

    def apply(self, M: GradedModule) -> TranslateStep:
        n = self.n
        alg = self.alg
        hom = HomComplex(self.res, M, 0)
        lower = {}
        for m in range(n):
            reps = hom.cohomology(m)[2]
            if reps:
                lower[m] = self._dimvec(hom, m)
        zs, bs, _, _ = hom.cohomology(n)
        field = alg.field
        # split by vertex: φ ∘ L_{e_v}
        ech = Echelon(field, track=True)
        for t, b in enumerate(bs):
            ech.add(b, ("b", t))
        reps, blocks = [], []
        for v in range(alg.nv):
            ev = alg.idem[v]
            for z in zs:
                y = self._act(hom, z, ev)
                if y and ech.add(y, ("r", len(reps))) is None:
                    reps.append(y)
                    blocks.append((v, 0))

        def reduce(z):
            co = ech.coordinates(z)
            if co is None:
                raise StructuralError("not a cocycle")
            return {lab[1]: c for lab, c in co.items() if lab[0] == "r" and c}

        action = [dict() for _ in range(alg.dim)]
        for t, r in enumerate(reps):
            for k in range(alg.dim):
                y = self._act(hom, r, k)
                if y:
                    red = reduce(y)
                    if red:
                        action[k][t] = red
        out = GradedModule(alg, blocks, action, f"tau-({M.name})" if M.name else None)
        return TranslateStep(out, hom, reduce, reps, lower)

    def _act(self, hom: HomComplex, phi: dict, k: int) -> dict:
        """``φ ∘ L_k`` on ``Q^n``."""
        nd = hom.N.dim
        out: dict = {}
        for g, x in self.lifts[k].items():
            if x:
                val = hom.evaluate(phi, x)
                if val:
                    add_scaled(out, {g * nd + m: c for m, c in val.items()}, hom.N.field.one)
        return out

    def _dimvec(self, hom, m):
        H = self._homology_module(hom, m)
        return H

    def _homology_module(self, hom, m):
        zs, bs, reps, _ = hom.cohomology(m)
        dv = [0] * self.alg.nv
        ech = Echelon(self.alg.field)
        for b in bs:
            ech.add(b)
        for v in range(self.alg.nv):
            ev = self.alg.idem[v]
            for z in zs:
                y = self._act(hom, z, ev)
                if y and ech.add(y) is None:
                    dv[v] += 1
        return dv

    def apply_map(self, step_src: "TranslateStep", step_tgt: "TranslateStep", F: dict) -> dict:
        """``τ^-(F)`` for ``F : M -> M'``, given the steps computed from ``M`` and ``M'``.

        ``step_src`` must be ``apply(M)`` and ``step_tgt`` must be ``apply(M')``.
        Returns the matrix (basis-image dict) of ``τ^- M -> τ^- M'``.
        """
        nd_src = step_src.hom.N.dim
        nd_tgt = step_tgt.hom.N.dim
        out = {}
        for t, r in enumerate(step_src.reps):
            y: dict = {}
            for key, c in r.items():
                g, m = divmod(key, nd_src)
                img = F.get(m)
                if img:
                    add_scaled(y, {g * nd_tgt + mm: x for mm, x in img.items()}, c)
            if y:
                red = step_tgt.reduce(y)
                if red:
                    out[t] = red
        return out


@dataclass
class NRIVerdict:
    passes: bool
    n: int
    horizon: int
    fails_at: int | None = None
    reason: str = ""
    gldim: int | None = None
    homology: list = dc_field(default_factory=list)    # per j: {cohomological degree: dimvec}

    @property
    def verdict(self):
        return "passes-to-horizon" if self.passes else f"fails-at-{self.fails_at}"


def _degree_zero_algebra(A) -> AdaptedAlgebra:
    from .present import degree_zero_part
    from .core import GradedPresentation
    if isinstance(A, AdaptedAlgebra):
        A = A.fd
    if isinstance(A, GradedPresentation):
        A = degree_zero_part(A)
    return adapt(ungraded(A))


def n_rep_infinite_test(A, n: int, horizon: int) -> NRIVerdict:
    """Check ``gldim A <= n`` and that ``ν_n^{-j}(A)`` is a module for ``1 <= j <= horizon``.

    While ``ν_n^{-(j-1)} A`` is a module ``M``, ``H^i(ν_n^{-j} A) = Ext^{n+i}(DA, M)``,
    so the test computes ``Ext^m(DA, M)`` for ``m <= n`` and continues with
    ``τ_n^- M = Ext^n(DA, M)``.
    """
    if n < 1 or horizon < 1:
        raise ParameterError("need n >= 1 and horizon >= 1")
    alg = _degree_zero_algebra(A)
    gl = global_dimension(alg, n)
    if gl is None:
        return NRIVerdict(False, n, horizon, 0, f"global dimension exceeds {n}")
    tr = InverseTranslation(alg, n)
    M = regular_module(alg)
    hist = []
    for j in range(1, horizon + 1):
        step = tr.apply(M)
        hom = {m - n: dv for m, dv in step.lower.items()}
        hom[0] = step.module.dimension_vector()
        hist.append(dict(sorted(hom.items())))
        if step.lower:
            m = min(step.lower)
            return NRIVerdict(False, n, horizon, j, f"H^{m - n} of nu_{n}^-{j}(A) is nonzero",
                              gl, hist)
        M = step.module
    return NRIVerdict(True, n, horizon, None, "", gl, hist)


# graded algebras known up to a degree bound

class GradedAlgebraData:
    """Graded algebra known in degrees ``0..bound``.

    ``dims[d]`` is the dimension of the degree-``d`` component and
    ``product(a, i, b, j)`` returns basis element ``i`` of degree ``a`` times
    basis element ``j`` of degree ``b`` (a vector over degree ``a + b``), for
    ``a + b <= bound``.  Products are cached.
    """

    def __init__(self, field, dims, product, labels=None, unit=None, name=None,
                 generated_in_degree_one=None):
        self.field = field
        self.dims = list(dims)
        self.bound = len(self.dims) - 1
        self._product = product
        self._cache: dict = {}
        self.labels = labels or [[f"x{d}_{i}" for i in range(n)] for d, n in enumerate(self.dims)]
        self.unit = unit
        self.name = name
        self.generated_in_degree_one = generated_in_degree_one

    def __repr__(self):
        return f"GradedAlgebraData(dims={self.dims})"

    def basis_product(self, a, i, b, j) -> dict:
        if a + b > self.bound:
            raise ParameterError(f"product lands in degree {a + b} beyond the window {self.bound}")
        key = (a, i, b, j)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._product(a, i, b, j)
            self._cache[key] = hit
        return hit

    def mul(self, a, x: dict, b, y: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            for j, e in y.items():
                p = self.basis_product(a, i, b, j)
                if p:
                    add_scaled(out, p, c * e)
        return out

    def truncate(self, bound) -> "GradedAlgebraData":
        if bound > self.bound:
            raise ParameterError("cannot extend a truncation")
        out = GradedAlgebraData(self.field, self.dims[:bound + 1], self.basis_product,
                                self.labels[:bound + 1], self.unit, self.name)
        return out

    def table(self, a, b):
        return [[self.basis_product(a, i, b, j) for j in range(self.dims[b])]
                for i in range(self.dims[a])]

    def associativity_failure(self, bound=None):
        bound = self.bound if bound is None else bound
        one = self.field.one
        for a in range(bound + 1):
            for b in range(bound + 1 - a):
                for c in range(bound + 1 - a - b):
                    for i in range(self.dims[a]):
                        for j in range(self.dims[b]):
                            ij = self.basis_product(a, i, b, j)
                            for k in range(self.dims[c]):
                                left = self.mul(a + b, ij, c, {k: one})
                                right = self.mul(a, {i: one}, b + c, self.basis_product(b, j, c, k))
                                if left != right:
                                    return (a, i), (b, j), (c, k)
        return None

    @classmethod
    def from_fd_algebra(cls, A: FDAlgebra, bound=None):
        if A.grading is None:
            raise ParameterError("need a graded algebra")
        top = A.highest_degree()
        bound = top if bound is None else bound
        comps = [A.component(d) for d in range(bound + 1)]
        pos = [{k: i for i, k in enumerate(c)} for c in comps]

        def product(a, i, b, j):
            p = A.table[comps[a][i]].get(comps[b][j], {})
            return {pos[a + b][k]: c for k, c in p.items()}

        labels = [[A.labels[k] for k in c] for c in comps]
        unit = {pos[0][k]: c for e in A.idempotents for k, c in e.items()}
        return cls(A.field, [len(c) for c in comps], product, labels, unit)

    @classmethod
    def from_presentation(cls, pres, bound: int):
        from .gb import normal_words_by_degree
        words, gb = normal_words_by_degree(pres, bound)
        q = pres.quiver
        g = pres.grading
        pos = [{w: i for i, w in enumerate(ws)} for ws in words]

        def product(a, i, b, j):
            x = q.compose_words(words[a][i], words[b][j])
            if x is None:
                return {}
            return {pos[a + b][w]: c for w, c in gb.nf_word(x).items()}

        labels = [[q.word_str(w) for w in ws] for ws in words]
        unit = {pos[0][(-(v + 1),)]: pres.field.one for v in range(len(q.vertices))
                if (-(v + 1),) in pos[0]}
        out = cls(pres.field, [len(ws) for ws in words], product, labels, unit)
        out.generated_in_degree_one = all(d <= 1 for d in g.by_index)
        return out


def preprojective(A, n: int, degree_bound: int, check=True) -> GradedAlgebraData:
    """``Π_{n+1} A = ⊕_i Hom_{D(A)}(A, ν_n^{-i} A)`` in degrees ``0..degree_bound``.

    Degree ``i`` is ``M_i = τ_n^{-i} A``.  For ``x ∈ M_i`` and ``y ∈ M_k`` the
    product is ``τ_n^{-k}(f_x)(y)`` with ``f_x : A -> M_i, a -> x a``; in
    degree 0 this is the multiplication of ``A``.
    """
    alg = _degree_zero_algebra(A)
    if check:
        verdict = n_rep_infinite_test(alg, n, max(degree_bound, 1))
        if not verdict.passes:
            raise StructuralError(
                f"A is not {n}-representation infinite up to {degree_bound}: {verdict.reason}")
    tr = InverseTranslation(alg, n)
    modules = [regular_module(alg)]
    steps = []
    for _ in range(degree_bound):
        st = tr.apply(modules[-1])
        if st.lower:
            raise StructuralError("nu_n^{-i}(A) is not concentrated in degree 0")
        steps.append(st)
        modules.append(st.module)
    # steps[i] = apply(modules[i]); modules[i+1] = steps[i].module
    one = alg.field.one
    cache: dict = {}

    def translated(i, x, k):
        """Matrix of ``τ^{-k}(f_x) : M_k -> M_{i+k}``."""
        key = (i, x, k)
        hit = cache.get(key)
        if hit is None:
            if k == 0:
                M = modules[i]
                hit = {b: M.act({x: one}, b) for b in range(alg.dim)}
                hit = {b: v for b, v in hit.items() if v}
            else:
                prev = translated(i, x, k - 1)
                hit = tr.apply_map(steps[k - 1], steps[i + k - 1], prev)
            cache[key] = hit
        return hit

    def product(a, x, b, y):
        return dict(translated(a, x, b).get(y, {}))

    labels = [[f"{alg.fd.labels[k]}" for k in range(alg.dim)]]
    for d in range(1, degree_bound + 1):
        labels.append([f"t{d}_{t}" for t in range(modules[d].dim)])
    unit = {alg.idem[v]: one for v in range(alg.nv)}
    out = GradedAlgebraData(alg.field, [M.dim for M in modules], product, labels, unit,
                            f"Pi_{n + 1}", generated_in_degree_one=True)
    out.modules = modules
    return out
