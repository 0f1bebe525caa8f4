"""Sparse exact linear algebra over a :class:`~koszulfg.field.Field`.

Vectors are plain dicts ``{index: scalar}`` with no stored zeros.  Everything
else in the package reduces to the two primitives here: an incremental
echelon basis (span membership, coordinates, rank) and kernels of maps given
by the images of basis vectors.
"""
from __future__ import annotations

import heapq


def add_scaled(x: dict, y: dict, c) -> None:
    """In place ``x += c*y``."""
    for k, v in y.items():
        w = x.get(k)
        if w is None:
            x[k] = c * v
        else:
            w = w + c * v
            if w:
                x[k] = w
            else:
                del x[k]


def scaled(y: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in y.items()}


def lincomb(pairs) -> dict:
    out: dict = {}
    for c, v in pairs:
        if c:
            add_scaled(out, v, c)
    return out


class Echelon:
    """Semi-echelon basis built by successive insertion.

    Row ``k`` has coefficient 1 at its pivot and zeros at the pivots of rows
    ``0..k-1``; reduction therefore walks pivots in insertion order.  With
    ``track=True`` each row remembers its expression in the inserted vectors,
    which makes kernels and coordinates available.
    """

    def __init__(self, field, track: bool = False):
        self.field = field
        self.track = track
        self.rows: list[dict] = []
        self.pivots: list = []
        self.pivot_row: dict = {}
        self.combos: list[dict] = []

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict, combo: dict | None = None):
        """Return ``(residual, combo)`` with ``v = residual + sum(rows)`` bookkeeping."""
        v = dict(v)
        pivot_row = self.pivot_row
        heap = [pivot_row[c] for c in v if c in pivot_row]
        if not heap:
            return v, combo
        heapq.heapify(heap)
        seen = set(heap)
        rows, pivots, track = self.rows, self.pivots, self.track and combo is not None
        while heap:
            k = heapq.heappop(heap)
            c = v.get(pivots[k])
            if c is None:
                continue
            row = rows[k]
            for col, val in row.items():
                w = v.get(col)
                if w is None:
                    v[col] = -c * val
                    j = pivot_row.get(col)
                    if j is not None and j not in seen:
                        seen.add(j)
                        heapq.heappush(heap, j)
                else:
                    w = w - c * val
                    if w:
                        v[col] = w
                    else:
                        del v[col]
            if track:
                add_scaled(combo, self.combos[k], -c)
        return v, combo

    def add(self, v: dict, label=None):
        """Insert ``v``; return ``None`` if independent, else its dependency combo.

        The dependency combo (only with tracking) expresses ``v`` minus inserted
        vectors as zero, i.e. it is a kernel vector in label coordinates.
        """
        combo = {label: self.field.one} if self.track else None
        r, combo = self.reduce(v, combo)
        if not r:
            return combo if self.track else {}
        piv = min(r)
        inv = 1 / r[piv]
        if inv != 1:
            r = {k: x * inv for k, x in r.items()}
            if combo is not None:
                combo = {k: x * inv for k, x in combo.items()}
        self.pivot_row[piv] = len(self.rows)
        self.rows.append(r)
        self.pivots.append(piv)
        if self.track:
            self.combos.append(combo)
        return None

    def contains(self, v: dict) -> bool:
        r, _ = self.reduce(v)
        return not r

    def coordinates(self, v: dict):
        """Coefficients of ``v`` in the inserted (independent) vectors, or ``None``."""
        if not self.track:
            raise ValueError("coordinates need a tracking echelon")
        combo: dict = {}
        r, combo = self.reduce(v, combo)
        if r:
            return None
        return {k: -x for k, x in combo.items()}

    def fully_reduced(self) -> list[dict]:
        """Reduced row echelon rows (each pivot appears in exactly one row)."""
        rows = [dict(r) for r in self.rows]
        n = len(rows)
        for k in range(n - 1, -1, -1):
            row = rows[k]
            for j in range(k + 1, n):
                c = row.get(self.pivots[j])
                if c:
                    add_scaled(row, rows[j], -c)
        return rows


def kernel(images: list[dict], field) -> list[dict]:
    """Basis of ``{x : sum_j x_j images[j] = 0}`` as dicts over ``range(len(images))``."""
    ech = Echelon(field, track=True)
    out = []
    for j, v in enumerate(images):
        dep = ech.add(v, j)
        if dep is not None:
            out.append(dep)
    return out


def rank(vectors, field) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


def span_basis(vectors, field) -> list[dict]:
    """Reduced basis of the span of ``vectors``."""
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.fully_reduced()


def complement_indices(vectors, subspace, field) -> list[int]:
    """Indices of ``vectors`` (greedy, in order) completing ``subspace`` to their joint span."""
    ech = Echelon(field)
    for v in subspace:
        ech.add(v)
    picked = []
    for i, v in enumerate(vectors):
        if ech.add(v) is None:
            picked.append(i)
    return picked


class Solver:
    """Solves ``sum_j x_j images[j] = y`` for many right-hand sides."""

    def __init__(self, images: list[dict], field):
        self.field = field
        self.ech = Echelon(field, track=True)
        self.kernel = []
        for j, v in enumerate(images):
            dep = self.ech.add(v, j)
            if dep is not None:
                self.kernel.append(dep)

    def solve(self, y: dict):
        return self.ech.coordinates(y)
