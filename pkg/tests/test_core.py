import pytest
from hypothesis import given, settings, strategies as st

from koszulfg.core import (ZERO, ArrowGrading, GradedPresentation, Path, PathElement, Quiver,
                           compose_paths, path_degree)
from koszulfg.errors import StructuralError
from koszulfg.field import GF, QQ

from strategies import all_words_up_to, quivers


def a3():
    return Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3)])


def dimer_quiver():
    arrows = []
    for i, (s, t) in enumerate([(1, 2), (2, 3), (3, 4), (4, 1)], start=1):
        arrows += [(f"x{i}", s, t), (f"y{i}", s, t)]
    return Quiver([1, 2, 3, 4], arrows)


def test_compose_in_path_order():
    q = a3()
    assert compose_paths(q.path("a1"), q.path("a2")) == q.path("a1", "a2")
    assert q.path("a1", "a2").arrows == ["a1", "a2"]


def test_lazy_path_is_identity():
    q = a3()
    assert compose_paths(q.lazy(1), q.path("a1")) == q.path("a1")
    assert compose_paths(q.path("a1"), q.lazy(2)) == q.path("a1")
    assert compose_paths(q.lazy(2), q.lazy(2)) == q.lazy(2)


def test_mismatch_gives_zero():
    q = a3()
    assert compose_paths(q.path("a2"), q.path("a1")) is ZERO
    assert not ZERO
    assert compose_paths(q.lazy(1), q.lazy(2)) is ZERO


def test_different_quivers_rejected():
    with pytest.raises(StructuralError):
        compose_paths(a3().path("a1"), Quiver([1], [("a", 1, 1)]).path("a"))


def test_quiver_validation():
    with pytest.raises(StructuralError):
        Quiver([1, 1], [])
    with pytest.raises(StructuralError):
        Quiver([1, 2], [("a", 1, 2), ("a", 2, 1)])
    with pytest.raises(StructuralError):
        Quiver([1], [("a", 1, 2)])
    with pytest.raises(StructuralError):
        a3().path("a2", "a1")


def test_path_degree():
    q = dimer_quiver()
    g = ArrowGrading(q, {a: (1 if a in ("x4", "y4") else 0) for a in q.arrow_names})
    assert path_degree(q.lazy(3), g) == 0
    assert path_degree(q.path("x1", "x2", "x3"), g) == 0
    assert path_degree(q.path("x1", "x2", "x3", "x4"), g) == 1


def test_grading_must_be_total():
    q = a3()
    with pytest.raises(StructuralError):
        ArrowGrading(q, {"a1": 1})
    with pytest.raises(StructuralError):
        ArrowGrading(q, {"a1": 1, "a2": -1})


def test_element_arithmetic():
    q = a3()
    x = q.element([(2, ["a1", "a2"]), (-1, ["a1"])])
    y = q.element([(1, ["a1"])])
    assert (x + y) - y == x
    assert (x - x).is_zero()
    assert str(x) == "-a1 + 2*a1*a2"
    z = y * q.element([(3, ["a2"])])
    assert z == q.element([(3, ["a1", "a2"])])
    assert (q.element([(1, ["a2"])]) * y).is_zero()


def test_prime_field_elements():
    q = a3()
    f = GF(5)
    x = q.element([(7, ["a1"])], field=f)
    assert x.coefficient(q.path("a1")) == f(2)
    assert (x.scale(5)).is_zero()


def test_presentation_splits_endpoints():
    q = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    r = q.element([(1, ["a", "b"]), (1, ["b", "a"])])
    pres = GradedPresentation(q, [r])
    assert len(pres.relations) == 2
    assert all(len(x.endpoints()) == 1 for x in pres.relations)


@st.composite
def quiver_with_paths(draw, k=3):
    q = draw(quivers(max_vertices=3, max_arrows=4))
    words = all_words_up_to(q, 3)
    ps = [Path(q, draw(st.sampled_from(words))) for _ in range(k)]
    return q, ps


@settings(max_examples=250, deadline=None)
@given(quiver_with_paths())
def test_composition_associative(data):
    q, (p, r, s) = data
    left = compose_paths(p, r)
    left = ZERO if left is ZERO else compose_paths(left, s)
    right = compose_paths(r, s)
    right = ZERO if right is ZERO else compose_paths(p, right)
    assert left == right


@settings(max_examples=250, deadline=None)
@given(quiver_with_paths(k=2), st.data())
def test_degree_additive(data, draw):
    q, (p, r) = data
    degs = {a: draw.draw(st.integers(0, 3)) for a in q.arrow_names}
    g = ArrowGrading(q, degs)
    pr = compose_paths(p, r)
    if pr is not ZERO:
        assert path_degree(pr, g) == path_degree(p, g) + path_degree(r, g)


@st.composite
def elements(draw, q, n=4):
    words = all_words_up_to(q, 2)
    terms = {}
    for _ in range(draw(st.integers(0, n))):
        w = draw(st.sampled_from(words))
        c = QQ(draw(st.fractions(min_value=-5, max_value=5, max_denominator=4)))
        terms[w] = terms.get(w, QQ(0)) + c
    return PathElement(q, terms, QQ)


@settings(max_examples=250, deadline=None)
@given(st.data())
def test_element_bilinear_and_canonical(data):
    q = data.draw(quivers(max_vertices=3, max_arrows=4))
    x, y, z = (data.draw(elements(q)) for _ in range(3))
    assert x + y - y == x
    assert (x + y) * z == x * z + y * z
    assert z * (x + y) == z * x + z * y
    assert (x * y) * z == x * (y * z)
    assert hash(x + y - y) == hash(x)
