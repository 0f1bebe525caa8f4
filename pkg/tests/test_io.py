import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from koszulfg.core import PathElement, Quiver
from koszulfg.errors import ParseError
from koszulfg.field import GF, QQ
from koszulfg.io import (Report, canonical, load_document, parse_document, parse_expression,
                         parse_text, render_text)

from examples import DATA
from strategies import all_words_up_to

TRIVEXT_Q = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3), ("b", 1, 3), ("r1", 3, 1), ("r2", 3, 1)])


def test_first_trivial_extension_relation():
    q = TRIVEXT_Q
    x = parse_expression("b*r1 - a1*a2*r2", q)
    assert x == q.element([(1, ["b", "r1"]), (-1, ["a1", "a2", "r2"])])
    assert parse_expression("b r1 - a1 a2 r2", q) == x


def test_lazy_path():
    q = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3)])
    assert parse_expression("e_1", q) == q.element([(1, q.lazy(1))])
    assert parse_expression("e_1 a1", q) == parse_expression("a1", q)


def test_composability_error_position():
    q = Quiver([1, 2, 3], [("a1", 1, 2), ("a2", 2, 3)])
    with pytest.raises(ParseError) as exc:
        parse_expression("a2*a1", q)
    assert exc.value.position == 3


def test_parse_errors():
    q = Quiver([1, 2], [("a", 1, 2)])
    with pytest.raises(ParseError) as exc:
        parse_expression("a + c", q)
    assert exc.value.position == 4
    with pytest.raises(ParseError):
        parse_expression("1/0 a", q)
    with pytest.raises(ParseError):
        parse_expression("3/ a", q)
    with pytest.raises(ParseError):
        parse_expression("(a", q)
    with pytest.raises(ParseError):
        parse_expression("2", q)


def test_coefficients_and_parentheses():
    q = TRIVEXT_Q
    x = parse_expression("2/3 b (r1 + r2) - a1*a2*r2", q)
    y = q.element([(Fraction(2, 3), ["b", "r1"]), (Fraction(2, 3), ["b", "r2"]),
                   (-1, ["a1", "a2", "r2"])])
    assert x == y
    assert parse_expression("3 a1", q, GF(3)).is_zero()


WORDS = [w for w in all_words_up_to(TRIVEXT_Q, 3)]


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.sampled_from(WORDS),
                       st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool),
                       max_size=5))
def test_print_parse_round_trip(terms):
    x = PathElement(TRIVEXT_Q, {w: QQ(c) for w, c in terms.items()}, QQ)
    if x.is_zero():
        assert str(x) == "0"
    else:
        assert parse_expression(str(x), TRIVEXT_Q) == x


def test_documents_load():
    doc = load_document(DATA / "trivext-A2tilde.alg")
    assert doc.kind == "quiver-algebra"
    assert doc.degrees["r1"] == 1 and doc.has_grading()
    assert len(doc.presentation().relations) == 6
    dimer = load_document(DATA / "conifold4.qp")
    assert dimer.kind == "dimer"
    assert dimer.options["matching"] == "x4 y4"
    assert len(dimer.dimer().faces) == 4


def test_document_errors_carry_offsets():
    with pytest.raises(ParseError):
        parse_document("[vertices]\n1\n[arrows]\na: 1 -> 2\n")
    with pytest.raises(ParseError):
        parse_document("[vertices]\n1 2\n[arrows]\na: 1 -> 2\n[relations]\na*a\n")
    with pytest.raises(ParseError):
        parse_document("[vertices]\n1 2\n[arrows]\n1a: 1 -> 2\n")
    with pytest.raises(ParseError):
        parse_document("[vertices]\n1\n[arrows]\nx: 1 -> 1\n[options]\nkind = dimer\n")


def test_inhomogeneous_relation_is_rejected_at_its_line():
    text = "[vertices]\n1 2 3\n[arrows]\na: 1 -> 2\nb: 2 -> 3\nc: 1 -> 3 deg=1\n[relations]\na*b - c\n"
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert exc.value.position == text.index("a*b - c")
    parse_document(text.replace("a: 1 -> 2", "a: 1 -> 2 deg=1"))


def test_char_option():
    doc = parse_document("[vertices]\n1 2\n[arrows]\na: 1 -> 2\n[options]\nchar = 5\n")
    assert doc.field == GF(5)


def test_report_renderings_carry_the_same_leaves():
    r = Report("center", {"kind": "x"}, {"ext": 8}, {"dims": {0: 1, 2: 5}, "ok": True},
               None, {"graded": [1, 0, 5], "nested": [{"a": Fraction(1, 2)}]}, ["w"])
    d = r.to_dict()
    assert json.loads(r.to_json()) == d
    flat = parse_text(r.to_text())
    assert flat["result.nested[0].a"] == "1/2"
    assert flat["evidence.dims.2"] == "5"
    assert flat["result.graded"] == "[1, 0, 5]"
    assert render_text(d) == r.to_text()
    assert canonical({1: (QQ(3), {2})}) == {"1": [3, [2]]}


def leaves(obj, prefix=""):
    """Independent flattening: dict keys joined by dots, list items of containers by [i]."""
    out = {}
    if isinstance(obj, dict):
        if not obj:
            out[prefix] = "{}"
        for k, v in obj.items():
            out.update(leaves(v, f"{prefix}.{k}" if prefix else k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            out.update(leaves(v, f"{prefix}[{i}]"))
    else:
        out[prefix] = obj if isinstance(obj, str) else json.dumps(obj)
    return out


scalars = st.one_of(st.integers(-9, 9), st.booleans(), st.none(),
                    st.text("abcxyz-_ ", min_size=1, max_size=6).map(str.strip).filter(bool))
keys = st.text("abcdef", min_size=1, max_size=4)
payloads = st.recursive(scalars, lambda kids: st.one_of(
    st.lists(kids, min_size=1, max_size=3), st.dictionaries(keys, kids, min_size=1, max_size=3)),
    max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(keys, payloads, min_size=1, max_size=4), payloads)
def test_text_and_json_reports_agree(evidence, result):
    r = Report("dual", {"kind": "quiver-algebra"}, {"dual": 6}, evidence, None, result, [])
    d = json.loads(r.to_json())
    assert parse_text(r.to_text()) == leaves(d)
