"""Noncommutative Gröbner bases in path algebras, truncated by path length.

Elements are handled internally as dicts ``{word: scalar}`` (see
:mod:`koszulfg.core`).  The monomial order compares (grade, length, word)
where words are compared lexicographically by arrow precedence; with the
trivial grading this is plain length-lexicographic.  For relations that are
homogeneous for the grading, rewriting never makes words longer, so a basis
in which every overlap of length at most ``bound`` reduces to zero computes
correct normal forms for all elements of length at most ``bound``.
"""
from __future__ import annotations

import heapq
from collections import Counter

from .core import ArrowGrading, GradedPresentation, PathElement, Quiver, word_length
from .errors import InconclusiveError, ParameterError, StructuralError


class MonomialOrder:
    """Grade, then length, then lexicographic order on arrow precedence."""

    def __init__(self, quiver: Quiver, grading: ArrowGrading | None = None, precedence=None):
        self.quiver = quiver
        self.grading = grading if grading is not None and not grading.is_trivial() else None
        names = quiver.arrow_names
        if precedence is None:
            precedence = names
        precedence = list(precedence)
        if sorted(precedence) != sorted(names):
            raise ParameterError("arrow precedence must list every arrow exactly once")
        self.precedence = precedence
        pos = {a: i for i, a in enumerate(precedence)}
        self.rank = [pos[a] for a in names]
        self._cache: dict = {}

    @property
    def kind(self):
        return "grade-length-lex" if self.grading is not None else "length-lex"

    def key(self, w):
        k = self._cache.get(w)
        if k is None:
            if w[0] < 0:
                k = (0, 0, w)
            else:
                g = self.grading.word_degree(w) if self.grading is not None else 0
                r = self.rank
                k = (g, len(w), tuple(r[i] for i in w))
            self._cache[w] = k
        return k

    def neg_key(self, w):
        g, n, t = self.key(w)
        return (-g, -n, tuple(-x for x in t))

    def leading(self, d: dict):
        return max(d, key=self.key)

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.quiver == other.quiver
                and self.precedence == other.precedence and self.grading == other.grading)

    def __hash__(self):
        return hash((self.quiver, tuple(self.precedence)))


class _Rewriter:
    """Leading-word table plus full reduction; shared by the builder and the result."""

    def __init__(self, quiver, order, field):
        self.quiver = quiver
        self.order = order
        self.field = field
        self.rules: dict = {}          # leading word -> tail dict (lw = -tail in quotient)
        self.lengths: Counter = Counter()
        self.killed: set = set()       # vertices v with e_v in the ideal
        self.memo: dict | None = None

    def add_rule(self, lw, poly):
        tail = {w: -c for w, c in poly.items() if w != lw}
        if lw[0] < 0:
            self.killed.add(-lw[0] - 1)
        else:
            self.lengths[len(lw)] += 1
        self.rules[lw] = tail

    def remove_rule(self, lw):
        tail = self.rules.pop(lw)
        if lw[0] < 0:
            self.killed.discard(-lw[0] - 1)
        else:
            self.lengths[len(lw)] -= 1
            if not self.lengths[len(lw)]:
                del self.lengths[len(lw)]
        poly = {w: -c for w, c in tail.items()}
        poly[lw] = self.field.one
        return poly

    def poly(self, lw):
        d = {w: -c for w, c in self.rules[lw].items()}
        d[lw] = self.field.one
        return d

    def visits_killed(self, w):
        if not self.killed:
            return False
        q = self.quiver
        if w[0] < 0:
            return (-w[0] - 1) in self.killed
        if q.asrc[w[0]] in self.killed:
            return True
        return any(q.atgt[i] in self.killed for i in w)

    def find_divisor(self, w):
        """``(start, lw)`` of the leftmost shortest leading word inside ``w``."""
        if w[0] < 0:
            return None
        rules = self.rules
        n = len(w)
        lens = sorted(self.lengths)
        for s in range(n):
            for ell in lens:
                if s + ell > n:
                    break
                sub = w[s:s + ell]
                if sub in rules:
                    return s, sub
        return None

    def is_normal(self, w):
        return not self.visits_killed(w) and self.find_divisor(w) is None

    def suffix_reducible(self, w):
        """Whether some leading word is a suffix of ``w`` (prefixes assumed normal)."""
        rules = self.rules
        n = len(w)
        for ell in self.lengths:
            if ell <= n and w[n - ell:] in rules:
                return True
        return False

    def reduce(self, d: dict) -> dict:
        """Fully reduced representative of ``d``."""
        if not d:
            return {}
        order = self.order
        memo = self.memo
        work = dict(d)
        heap = [(order.neg_key(w), w) for w in work]
        heapq.heapify(heap)
        out: dict = {}
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, None)
            if c is None:
                continue
            if memo is not None and w in memo:
                for x, e in memo[w].items():
                    v = out.get(x)
                    v = c * e if v is None else v + c * e
                    if v:
                        out[x] = v
                    else:
                        del out[x]
                continue
            if self.visits_killed(w):
                continue
            div = self.find_divisor(w)
            if div is None:
                v = out.get(w)
                v = c if v is None else v + c
                if v:
                    out[w] = v
                else:
                    del out[w]
                continue
            s, lw = div
            u, v_ = w[:s], w[s + len(lw):]
            for t, e in self.rules[lw].items():
                if t[0] < 0:
                    x = u + v_ if (u or v_) else t
                else:
                    x = u + t + v_
                val = work.get(x)
                if val is None:
                    work[x] = c * e
                    heapq.heappush(heap, (order.neg_key(x), x))
                else:
                    val = val + c * e
                    if val:
                        work[x] = val
                    else:
                        del work[x]
        return out


class GroebnerBasis:
    """Reduced Gröbner basis complete for overlaps of length at most ``bound``.

    ``complete`` is true when no overlap was skipped, i.e. the basis is a
    genuine (untruncated) Gröbner basis.
    """

    def __init__(self, rewriter: _Rewriter, bound: int, complete: bool):
        self._rw = rewriter
        self.quiver = rewriter.quiver
        self.order = rewriter.order
        self.field = rewriter.field
        self.bound = bound
        self.complete = complete
        rewriter.memo = {}
        self._nf_cache = rewriter.memo

    def __len__(self):
        return len(self._rw.rules)

    @property
    def leading_words(self):
        return sorted(self._rw.rules, key=self.order.key)

    def elements(self) -> list[PathElement]:
        out = []
        for lw in self.leading_words:
            d = {w: -c for w, c in self._rw.rules[lw].items()}
            d[lw] = self.field.one
            out.append(PathElement(self.quiver, d, self.field))
        return out

    def max_leading_length(self):
        return max((word_length(w) for w in self._rw.rules), default=0)

    def _check_length(self, n):
        if not self.complete and n > self.bound:
            raise ParameterError(
                f"element of length {n} exceeds the Gröbner basis bound {self.bound}")

    def nf_word(self, w) -> dict:
        r = self._nf_cache.get(w)
        if r is None:
            self._check_length(word_length(w))
            r = self._rw.reduce({w: self.field.one})
            self._nf_cache[w] = r
        return r

    def reduce_dict(self, d: dict) -> dict:
        return self._rw.reduce(d)

    def normal_form(self, x: PathElement) -> PathElement:
        if x.quiver != self.quiver:
            raise StructuralError("element is not in this path algebra")
        self._check_length(x.max_length())
        return PathElement(self.quiver, self.reduce_dict(x.terms), self.field)

    def contains(self, x: PathElement) -> bool:
        return not self.normal_form(x).terms

    def is_normal(self, w) -> bool:
        return self._rw.is_normal(w)

    def extend_normal(self, w, a):
        """``w·a`` if it is a normal word (``w`` assumed normal), else ``None``."""
        q = self.quiver
        if q.word_target(w) != q.asrc[a]:
            return None
        x = (a,) if w[0] < 0 else w + (a,)
        if self._rw.killed and q.atgt[a] in self._rw.killed:
            return None
        if self._rw.suffix_reducible(x):
            return None
        return x

    def normal_words(self, max_length: int, arrows=None, grading=None, max_degree=None):
        """Normal words grouped by length ``0..max_length``.

        Optionally only words in ``arrows``, or of ``grading``-degree at most
        ``max_degree`` (the search prunes, since degrees are nonnegative).
        """
        q = self.quiver
        deg = grading.by_index if grading is not None else None
        allowed = None if arrows is None else set(arrows)
        layer = [(-(v + 1),) for v in range(len(q.vertices)) if v not in self._rw.killed]
        layers = [layer]
        for _ in range(max_length):
            nxt = []
            for w in layer:
                for a in q.out_arrows[q.word_target(w)]:
                    if allowed is not None and a not in allowed:
                        continue
                    if deg is not None and deg[a] and grading.word_degree(w) + deg[a] > max_degree:
                        continue
                    x = self.extend_normal(w, a)
                    if x is not None:
                        nxt.append(x)
            layers.append(nxt)
            layer = nxt
            if not nxt:
                break
        while len(layers) < max_length + 1:
            layers.append([])
        return layers


def _overlaps(a, b):
    """Proper overlaps: ``k`` with suffix of ``a`` of length ``k`` equal to prefix of ``b``."""
    out = []
    for k in range(1, min(len(a), len(b))):
        if a[len(a) - k:] == b[:k]:
            out.append(k)
    return out


def _times_word(q, d, w, left):
    out = {}
    for t, c in d.items():
        x = q.compose_words(w, t) if left else q.compose_words(t, w)
        if x is not None:
            out[x] = c
    return out


def buchberger_truncated(relations, order: MonomialOrder, bound: int) -> GroebnerBasis:
    """Truncated noncommutative Buchberger algorithm.

    Overlap obstructions are processed by increasing length; those longer than
    ``bound`` are skipped (and the result is then marked incomplete).
    """
    relations = [r for r in relations if r.terms]
    q = order.quiver
    if relations:
        field = relations[0].field
    else:
        from .field import QQ
        field = QQ
    for r in relations:
        if r.quiver != q:
            raise StructuralError(f"relation {r} is not in the order's path algebra")
        if r.max_length() > bound:
            raise ParameterError(f"bound {bound} is smaller than the length of relation {r}")
        if order.grading is not None and not r.is_homogeneous(order.grading):
            raise StructuralError(f"relation {r} is not homogeneous for the grading of the order")
    rw = _Rewriter(q, order, field)
    heap = []
    seq = 0
    for r in relations:
        # split by endpoints so that every element stays endpoint-homogeneous
        parts: dict = {}
        for w, c in r.terms.items():
            parts.setdefault((q.word_source(w), q.word_target(w)), {})[w] = c
        for key in sorted(parts):
            p = parts[key]
            heap.append((max(word_length(w) for w in p), seq, p))
            seq += 1
    heapq.heapify(heap)
    skipped = False
    while heap:
        _, _, p = heapq.heappop(heap)
        r = rw.reduce(p)
        if not r:
            continue
        lw = order.leading(r)
        inv = 1 / r[lw]
        if inv != 1:
            r = {w: c * inv for w, c in r.items()}
        # drop rules whose leading word now reduces; re-queue them
        for old in list(rw.rules):
            if _divides(q, lw, old):
                poly = rw.remove_rule(old)
                heapq.heappush(heap, (word_length(old), seq, poly))
                seq += 1
        rw.add_rule(lw, r)
        if lw[0] < 0:
            continue
        for other in list(rw.rules):
            if other[0] < 0:
                continue
            pairs = [(lw, other, k) for k in _overlaps(lw, other)]
            if other != lw:
                pairs += [(other, lw, k) for k in _overlaps(other, lw)]
            for a, b, k in pairs:
                length = len(a) + len(b) - k
                if length > bound:
                    skipped = True
                    continue
                fa = rw.poly(a)
                fb = rw.poly(b)
                s = _times_word(q, fa, b[k:], left=False)
                t = _times_word(q, fb, a[:len(a) - k], left=True)
                for w, c in t.items():
                    v = s.get(w)
                    v = -c if v is None else v - c
                    if v:
                        s[w] = v
                    else:
                        s.pop(w, None)
                if s:
                    heapq.heappush(heap, (length, seq, s))
                    seq += 1
    # tail reduction for a canonical (reduced) basis
    final = _Rewriter(q, order, field)
    for lw in sorted(rw.rules, key=order.key):
        final.add_rule(lw, {})
    for lw in sorted(rw.rules, key=order.key):
        tail = {w: -c for w, c in rw.rules[lw].items()}
        red = rw.reduce(tail)
        final.rules[lw] = {w: -c for w, c in red.items()}
    return GroebnerBasis(final, bound, not skipped)


def _divides(q, small, big):
    if small[0] < 0:
        v = -small[0] - 1
        if big[0] < 0:
            return -big[0] - 1 == v
        return q.asrc[big[0]] == v or any(q.atgt[i] == v for i in big)
    if big[0] < 0:
        return False
    n, m = len(small), len(big)
    for s in range(m - n + 1):
        if big[s:s + n] == small:
            return True
    return False


def presentation_order(pres: GradedPresentation, precedence=None) -> MonomialOrder:
    """Grade-first order when the relations are homogeneous, length-lex otherwise."""
    g = pres.grading if pres.is_homogeneous() else None
    return MonomialOrder(pres.quiver, g, precedence)


def groebner(pres: GradedPresentation, bound: int, precedence=None) -> GroebnerBasis:
    """Cached truncated Gröbner basis of a presentation's ideal."""
    key = tuple(precedence) if precedence is not None else None
    cache = pres._gb_cache
    best = None
    for (b, k), gb in cache.items():
        if k == key and (b >= bound or gb.complete):
            if best is None or b < best.bound:
                best = gb
    if best is not None:
        return best
    bound = max(bound, pres.max_relation_length())
    gb = buchberger_truncated(pres.relations, presentation_order(pres, precedence), bound)
    cache[(bound, key)] = gb
    return gb


def normal_form(x: PathElement, gb: GroebnerBasis) -> PathElement:
    return gb.normal_form(x)


def in_ideal(x: PathElement, gb: GroebnerBasis) -> bool:
    return gb.contains(x)


def _check_homogeneous(pres):
    bad = pres.inhomogeneous_relations()
    if bad:
        raise StructuralError(f"relation {bad[0]} is not homogeneous for the grading")


def degree_zero_cycle(gb: GroebnerBasis, grading: ArrowGrading):
    """A cycle of the normal-word graph on degree-0 arrows, or ``None``.

    Nodes are normal words of length ``m-1`` (``m`` = longest leading word);
    a cycle pumps arbitrarily long degree-0 normal words.
    """
    q = gb.quiver
    zero = [i for i, d in enumerate(grading.by_index) if d == 0]
    m = max(gb.max_leading_length(), 2)
    layers = gb.normal_words(m - 1, zero)
    nodes = layers[m - 1]
    if not nodes:
        return None
    node_set = set(nodes)
    adj = {}
    for w in nodes:
        succ = []
        for a in q.out_arrows[q.word_target(w)]:
            if grading.by_index[a] != 0:
                continue
            x = gb.extend_normal(w, a)
            if x is not None:
                y = x[1:] if m - 1 >= 1 else x
                if y in node_set:
                    succ.append((a, y))
        adj[w] = succ
    color = {}
    for root in nodes:
        if root in color:
            continue
        stack = [(root, iter(adj[root]))]
        color[root] = 1
        trail = [root]
        arrows_on_trail = []
        while stack:
            w, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[w] = 2
                stack.pop()
                trail.pop()
                if arrows_on_trail:
                    arrows_on_trail.pop()
                continue
            a, y = nxt
            if color.get(y) == 1:
                i = trail.index(y)
                cyc = arrows_on_trail[i:] + [a]
                return tuple(cyc)
            if y not in color:
                color[y] = 1
                stack.append((y, iter(adj[y])))
                trail.append(y)
                arrows_on_trail.append(a)
    return None


def graded_dimensions(pres: GradedPresentation, bound: int, max_length: int = 64,
                      precedence=None) -> list[int]:
    """Dimensions of the graded pieces of ``kQ/I`` in degrees ``0..bound``."""
    words, _ = _normal_words_upto(pres, bound, max_length, precedence)
    return [len(ws) for ws in words]


def normal_words_by_degree(pres: GradedPresentation, bound: int, max_length: int = 64,
                           precedence=None):
    """Normal words of degree ``0..bound`` grouped by degree, and a Gröbner basis
    long enough to reduce products of any two of them."""
    words, gb = _normal_words_upto(pres, bound, max_length, precedence)
    longest = max((len(w) for ws in words for w in ws if w[0] >= 0), default=0)
    if not gb.complete and gb.bound < 2 * longest:
        gb = groebner(pres, 2 * longest, precedence)
    return words, gb


def _normal_words_upto(pres, bound, max_length, precedence):
    _check_homogeneous(pres)
    g = pres.grading
    positive = all(d > 0 for d in g.by_index)
    length = max(bound, pres.max_relation_length(), 1)
    while True:
        gb = groebner(pres, length, precedence)
        layers = gb.normal_words(length, grading=g, max_degree=bound)
        words = [[] for _ in range(bound + 1)]
        for layer in layers:
            for w in layer:
                d = g.word_degree(w)
                if d <= bound:
                    words[d].append(w)
        # prefixes of normal words are normal and degrees are nonnegative
        if positive or not any(g.word_degree(w) <= bound for w in layers[length]):
            return words, gb
        if gb.complete:
            cyc = degree_zero_cycle(gb, g)
            if cyc is not None:
                names = "*".join(pres.quiver.arrows[i][0] for i in cyc)
                raise StructuralError(f"degree-0 part is infinite dimensional (pumping cycle {names})")
        if length >= max_length:
            raise InconclusiveError(
                f"normal words of degree <= {bound} still present at length {length}",
                suggestion=2 * length)
        length = min(length * 3 // 2 + 1, max_length)


def quotient_dimension(pres: GradedPresentation, max_length: int = 64) -> int | None:
    """Total dimension of ``kQ/I`` if finite, else ``None`` (needs a complete basis)."""
    length = max(pres.max_relation_length() + 1, 2)
    while True:
        gb = groebner(pres, length)
        layers = gb.normal_words(length)
        if not layers[length]:
            return sum(len(x) for x in layers)
        if gb.complete:
            if degree_zero_cycle(gb, ArrowGrading.trivial(pres.quiver)) is not None:
                return None
        if length >= max_length:
            raise InconclusiveError(f"normal words persist at length {length}", suggestion=2 * length)
        length = min(2 * length, max_length)


def degree_zero_analysis(pres: GradedPresentation, max_length: int = 64):
    """Decide finiteness of the degree-0 part.

    Returns ``("finite", (words, gb))`` with the degree-0 normal words and a
    basis long enough to multiply them, or ``("infinite", cycle)`` with a
    pumping cycle of arrow indices.  Raises :class:`InconclusiveError` when the
    length cap is reached first.
    """
    _check_homogeneous(pres)
    g = pres.grading
    zero = [i for i, d in enumerate(g.by_index) if d == 0]
    length = max(pres.max_relation_length() + 1, 2)
    while True:
        gb = groebner(pres, length)
        layers = gb.normal_words(length, zero)
        if not layers[length]:
            words = [w for layer in layers for w in layer]
            longest = max((len(w) for w in words if w[0] >= 0), default=0)
            if not gb.complete and gb.bound < 2 * longest:
                gb = groebner(pres, 2 * longest)
            return "finite", (words, gb)
        if gb.complete:
            cyc = degree_zero_cycle(gb, g)
            if cyc is not None:
                return "infinite", cyc
        if length >= max_length:
            raise InconclusiveError(
                f"degree-0 normal words persist at length {length}", suggestion=2 * length)
        length = min(2 * length, max_length)


def degree_zero_normal_words(pres: GradedPresentation, max_length: int = 64):
    """Degree-0 normal words and a Gröbner basis able to multiply them.

    Raises :class:`StructuralError` naming a pumping cycle when the degree-0
    part is infinite dimensional.
    """
    kind, data = degree_zero_analysis(pres, max_length)
    if kind == "infinite":
        names = "*".join(pres.quiver.arrows[i][0] for i in data)
        raise StructuralError(f"degree-0 part is infinite dimensional (pumping cycle {names})")
    return data
