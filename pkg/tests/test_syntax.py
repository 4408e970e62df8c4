import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheesescript.stdlib import corpus_names, corpus_source
from cheesescript.syntax import ParseError, ast as A, parse_expression, parse_program, pretty, tokenize


def shape(node):
    """AST without source spans, for structural comparison."""
    if isinstance(node, A.Node):
        return (type(node).__name__,) + tuple(
            shape(getattr(node, f.name)) for f in dataclasses.fields(node) if f.name != "span"
        )
    if isinstance(node, (tuple, list)):
        return tuple(shape(x) for x in node)
    return node


def test_unicode_and_ascii_spellings_tokenize_alike():
    uni = [t.text for t in tokenize("f ≡ x → y ↦ z ⇒ w ← v")]
    ascii_ = [t.text for t in tokenize("f :=: x -> y |-> z => w <- v")]
    assert uni == ascii_


def test_euro_amounts_are_integers():
    toks = tokenize("€5")
    assert (toks[0].kind, toks[0].text) == ("int", "5")


def test_comments_are_skipped():
    kinds = [t.kind for t in tokenize("1 /* block */ + // line\n 2")]
    assert kinds == ["int", "punct", "int", "eof"]


def test_token_spans_track_lines_and_columns():
    toks = tokenize("a\n  bb")
    assert (toks[1].span.start_line, toks[1].span.start_col) == (2, 3)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_program("x :=: 1 +;;\n", "bad.acts")
    assert info.value.span is not None
    assert "bad.acts:1:" in str(info.value)


def test_unterminated_string_is_a_parse_error():
    with pytest.raises(ParseError):
        tokenize('"abc')


def test_program_splits_on_double_semicolon():
    items = parse_program("1;; 2;;\n3;;")
    assert [type(i).__name__ for i in items] == ["Literal"] * 3


def test_block_separators_are_kept():
    e = parse_expression("{a, b; c}")
    assert isinstance(e, A.Block)
    assert e.separators == (",", ";")


def test_definition_with_result_type():
    d = parse_expression("f(n |-> Integer) |-> Integer :=: n")
    assert isinstance(d, A.Define)
    assert d.target.name == "f"
    assert isinstance(d.target.result, A.TName)


def test_bare_method_has_no_parameter_list():
    e = parse_expression("(| getBalance -> 1, deposit(x) -> x |)")
    methods = e.facets[0][1]
    assert methods[0].params is None
    assert len(methods[1].params) == 1


def test_conditional_handlers():
    e = parse_expression("x ?? (1 -> a, (> 1) -> b, else -> c)")
    assert [h.kind for h in e.handlers] == ["case", "case", "else"]
    assert isinstance(e.handlers[1].pattern, A.PGuard)


def test_non_tail_inline_call_is_rejected():
    with pytest.raises(ParseError):
        parse_expression("inline f(n = 3) -> 1 + f(n - 1)")


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trips_through_printer(name):
    for item in parse_program(corpus_source(name)):
        again = parse_program(pretty(item) + ";;")
        assert len(again) == 1
        assert shape(again[0]) == shape(item)


# ---------------------------------------------------------------- properties

_leaf = st.one_of(
    st.integers(min_value=0, max_value=10**6).map(str),
    st.sampled_from(["x", "y", "total", "true", "false", '"s"']),
)


def _combine(children):
    ops = st.sampled_from(["+", "-", "*", "<", "=", "and", "or", "##"])
    return st.one_of(
        st.tuples(children, ops, children).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.lists(children, max_size=3).map(lambda xs: "[" + ", ".join(xs) + "]"),
        st.tuples(children, children).map(lambda t: f"f({t[0]}, {t[1]})"),
        children.map(lambda c: f"{c}.m"),
    )


expressions = st.recursive(_leaf, _combine, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_print_then_parse_is_identity(src):
    e = parse_expression(src)
    assert shape(parse_expression(pretty(e))) == shape(e)


@settings(max_examples=100, deadline=None)
@given(expressions)
def test_pretty_is_a_fixpoint(src):
    once = pretty(parse_expression(src))
    assert pretty(parse_expression(once)) == once


def test_repeated_literal_patterns_are_rejected():
    with pytest.raises(ParseError, match="disjoint"):
        parse_expression("x ?? (1 -> a, 1 -> b)")


@pytest.mark.parametrize("name", corpus_names())
def test_ascii_spelling_of_corpus_parses_identically(name):
    from cheesescript.syntax.lexer import UNICODE_PUNCT

    src = corpus_source(name)
    ascii_src = src
    for glyph, ascii_form in UNICODE_PUNCT.items():
        ascii_src = ascii_src.replace(glyph, f" {ascii_form} ")
    assert [shape(i) for i in parse_program(ascii_src)] == [shape(i) for i in parse_program(src)]
