import pytest

from koszulfg.errors import ParameterError, StructuralError
from koszulfg.io import load_document
from koszulfg.koszul import (graded_algebra, graded_ext_table, graded_symmetric_check, koszul_dual,
                             orthogonality_check)
from koszulfg.modcplx import preprojective
from koszulfg.present import algebra_from_presentation, trivial_extension

from examples import DATA, dimer_degree_zero, example_algebra, kronecker, linear_a


def test_ext_table_of_kronecker_trivial_extension():
    tbl = graded_ext_table(trivial_extension(kronecker(2)), None, 6)
    assert tbl.support() == [(0, 0), (2, 1), (4, 2), (6, 3)]
    assert [tbl[k] for k in tbl.support()] == [4, 12, 20, 28]
    assert orthogonality_check(tbl, 2).orthogonal
    assert not orthogonality_check(tbl, 3).orthogonal


def test_ext_table_of_dimer_trivial_extension():
    tbl = graded_ext_table(trivial_extension(dimer_degree_zero()), None, 6)
    assert tbl.support() == [(0, 0), (3, 1), (6, 2)]
    assert orthogonality_check(tbl, 3).orthogonal


def test_dynkin_control_violates_orthogonality():
    tbl = graded_ext_table(trivial_extension(linear_a(2)), None, 4)
    v = orthogonality_check(tbl, 2)
    assert not v.orthogonal
    assert v.violation == (1, 1)
    with pytest.raises(StructuralError):
        koszul_dual(trivial_extension(linear_a(2)), None, 2, 2)


@pytest.mark.parametrize("build,n,bound", [(lambda: kronecker(2), 1, 4),
                                           (example_algebra, 1, 4),
                                           (dimer_degree_zero, 2, 3)])
def test_dual_dimensions_equal_preprojective(build, n, bound):
    A = build()
    G = koszul_dual(trivial_extension(A), None, n + 1, bound)
    P = preprojective(A, n, bound)
    assert G.dims == P.dims


def test_dual_is_associative_with_unit():
    G = koszul_dual(trivial_extension(kronecker(2)), None, 2, 3)
    assert G.associativity_failure(3) is None
    for d in range(3):
        for i in range(G.dims[d]):
            x = {i: G.field.one}
            assert G.mul(0, G.unit, d, x) == x
            assert G.mul(d, x, 0, G.unit) == x


def test_dual_degree_zero_is_endomorphism_algebra():
    A = example_algebra()
    G = koszul_dual(trivial_extension(A), None, 2, 1)
    assert G.dims[0] == A.dim
    assert G.associativity_failure(1) is None


def test_dual_window_is_enforced():
    G = koszul_dual(trivial_extension(kronecker(2)), None, 2, 2)
    with pytest.raises(ParameterError):
        G.basis_product(2, 0, 1, 0)


def test_graded_symmetry():
    D = trivial_extension(example_algebra())
    v = graded_symmetric_check(D)
    assert v.symmetric and v.a == 1 and v.form
    P = load_document(DATA / "trivext-A2tilde.alg").presentation()
    assert graded_symmetric_check(algebra_from_presentation(P)[0]).symmetric
    for A in (kronecker(2), linear_a(2)):
        B = trivial_extension(A)
        assert graded_symmetric_check(B).symmetric


def test_non_self_injective_is_not_symmetric():
    from koszulfg.core import ArrowGrading, GradedPresentation, Quiver
    q = Quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])
    P = GradedPresentation(q, [], ArrowGrading(q, {"a": 1, "b": 1}))
    assert not graded_symmetric_check(algebra_from_presentation(P)[0]).symmetric


def test_graded_algebra_requires_grading():
    with pytest.raises(ParameterError):
        graded_algebra(kronecker(2))
