import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from koszulfg.core import ArrowGrading, GradedPresentation, PathElement, Quiver
from koszulfg.errors import ParameterError, StructuralError
from koszulfg.field import QQ
from koszulfg.gb import (MonomialOrder, buchberger_truncated, degree_zero_cycle, graded_dimensions,
                         groebner, in_ideal, normal_form, quotient_dimension)

from strategies import (dense_quotient_dims, graded_presentations, ideal_component_contains,
                        paths_of_degree, random_presentation)


def example_trivext_quiver():
    return Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3), ("b", 1, 3), ("r1", 3, 1), ("r2", 3, 1)])


def example_trivext_relations(q):
    def e(*terms):
        return q.element([(c, p.split()) for c, p in terms])
    return [e((1, "b r1"), (-1, "a1 a2 r2")), e((1, "r1 b"), (-1, "r2 a1 a2")), e((1, "a2 r1")),
            e((1, "r1 a1")), e((1, "b r2")), e((1, "r2 b"))]


def example_trivext_presentation():
    q = example_trivext_quiver()
    g = ArrowGrading(q, {"a1": 0, "a2": 0, "b": 0, "r1": 1, "r2": 1})
    return GradedPresentation(q, example_trivext_relations(q), g)


def doubled_kronecker(m, dual_degree_only=True):
    q = Quiver([1, 2], [(f"a{i}", 1, 2) for i in range(m)] + [(f"s{i}", 2, 1) for i in range(m)])
    mesh1 = q.element([(1, [f"a{i}", f"s{i}"]) for i in range(m)])
    mesh2 = q.element([(1, [f"s{i}", f"a{i}"]) for i in range(m)])
    if dual_degree_only:
        degs = {**{f"a{i}": 0 for i in range(m)}, **{f"s{i}": 1 for i in range(m)}}
    else:
        degs = {a: 1 for a in q.arrow_names}
    return GradedPresentation(q, [mesh1, mesh2], ArrowGrading(q, degs))


def test_empty_relations():
    q = Quiver([1, 2], [("a", 1, 2)])
    gb = buchberger_truncated([], MonomialOrder(q), 4)
    assert len(gb) == 0
    assert gb.complete


def test_monomial_ideal():
    q = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3)])
    gb = buchberger_truncated([q.element([(1, ["a1", "a2"])])], MonomialOrder(q), 4)
    assert [str(e) for e in gb.elements()] == ["a1*a2"]
    assert normal_form(q.element([(1, ["a1", "a2"])]), gb).is_zero()
    q2 = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3), ("b", 1, 3)])
    gb2 = buchberger_truncated([q2.element([(1, ["a1", "a2"])])], MonomialOrder(q2), 4)
    x = q2.element([(1, ["b"]), (1, ["a1", "a2"])])
    assert normal_form(x, gb2) == q2.element([(1, ["b"])])


def test_bound_below_relation_length():
    q = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3)])
    with pytest.raises(ParameterError):
        buchberger_truncated([q.element([(1, ["a1", "a2"])])], MonomialOrder(q), 1)


def test_example_trivext_quotient_dimension():
    pres = example_trivext_presentation()
    gb = groebner(pres, 6)
    assert gb.complete
    assert quotient_dimension(pres) == 14
    assert graded_dimensions(pres, 3) == [7, 7, 0, 0]


def test_normal_form_above_bound_rejected():
    q = Quiver([1], [("x", 1, 1), ("y", 1, 1)])
    rel = q.element([(1, ["x", "y"]), (-1, ["y", "x"]), (1, ["x", "x"])])
    gb = buchberger_truncated([rel], MonomialOrder(q), 3)
    if not gb.complete:
        with pytest.raises(ParameterError):
            normal_form(q.element([(1, ["x"] * 5)]), gb)


def test_graded_dimensions_simple():
    q = Quiver([1, 2], [("a", 1, 2)])
    pres = GradedPresentation(q, [], ArrowGrading.by_length(q))
    assert graded_dimensions(pres, 3) == [2, 1, 0, 0]


def test_inhomogeneous_relation_named():
    q = Quiver([1, 2], [("a", 1, 2), ("b", 1, 2), ("c", 2, 2)])
    rel = q.element([(1, ["a"]), (1, ["b", "c"])])
    pres = GradedPresentation(q, [rel], ArrowGrading.by_length(q))
    with pytest.raises(StructuralError, match="a"):
        graded_dimensions(pres, 2)


def test_infinite_degree_zero_part():
    q = Quiver([1], [("x", 1, 1)])
    pres = GradedPresentation(q, [], ArrowGrading.trivial(q))
    with pytest.raises(StructuralError, match="x"):
        graded_dimensions(pres, 1)
    assert degree_zero_cycle(groebner(pres, 2), pres.grading) == (0,)


def tensor_degree_split(q):
    def key(w):
        if w[0] < 0:
            return 0
        return sum(1 for i in w if q.arrows[i][0].startswith("s"))
    return key


def test_preprojective_k3_tensor_dimensions():
    pres = doubled_kronecker(3)
    dims = graded_dimensions(pres, 4)
    assert dims[0] == 5
    assert all(a < b for a, b in zip(dims, dims[1:]))
    by_length = doubled_kronecker(3, dual_degree_only=False)
    q = by_length.quiver
    dense = dense_quotient_dims(by_length, 5, split=tensor_degree_split(q))
    for j in range(3):
        assert dims[j] == sum(v for (d, t), v in dense.items() if t == j)


def test_preprojective_k2_tensor_dimensions():
    dims = graded_dimensions(doubled_kronecker(2), 4)
    by_length = doubled_kronecker(2, dual_degree_only=False)
    dense = dense_quotient_dims(by_length, 9, split=tensor_degree_split(by_length.quiver))
    for j in range(5):
        assert dims[j] == sum(v for (d, t), v in dense.items() if t == j)


def test_deterministic():
    rng = random.Random(7)
    for _ in range(10):
        pres = random_presentation(rng)
        a = groebner(GradedPresentation(pres.quiver, pres.relations, pres.grading), 5)
        b = groebner(GradedPresentation(pres.quiver, pres.relations, pres.grading), 5)
        assert [e.sorted_terms() for e in a.elements()] == [e.sorted_terms() for e in b.elements()]


def test_precedence_changes_basis_not_quotient():
    pres = example_trivext_presentation()
    other = list(reversed(pres.quiver.arrow_names))
    gb1 = groebner(pres, 6)
    gb2 = groebner(pres, 6, precedence=other)
    for r in gb1.elements():
        assert gb2.contains(r)
    for r in gb2.elements():
        assert gb1.contains(r)


@settings(max_examples=120, deadline=None)
@given(graded_presentations(degrees=(1, 2)))
def test_graded_dimensions_match_dense_oracle(pres):
    assert graded_dimensions(pres, 4) == dense_quotient_dims(pres, 4)


@st.composite
def presentation_and_element(draw):
    pres = draw(graded_presentations())
    q = pres.quiver
    d = draw(st.integers(1, 3))
    words = paths_of_degree(q, pres.grading.by_index, d)
    assume(words)
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        w = draw(st.sampled_from(words))
        terms[w] = terms.get(w, QQ(0)) + QQ(draw(st.integers(-3, 3)))
    return pres, PathElement(q, terms, QQ), d


@settings(max_examples=250, deadline=None)
@given(presentation_and_element())
def test_normal_form_idempotent_and_congruent(data):
    pres, x, d = data
    gb = groebner(pres, 4)
    nf = normal_form(x, gb)
    assert normal_form(nf, gb) == nf
    assert ideal_component_contains(pres, x - nf, d)
    assert in_ideal(x, gb) == ideal_component_contains(pres, x, d)
