import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheesescript.kernel import ReturnedC, ThrewC, default_interpreter, env_bind, evaluate, show
from cheesescript.stdlib import corpus_names, corpus_source, parse_json, print_json

from conftest import run_values


def value(src: str, **bindings) -> str:
    it = default_interpreter()
    env = it.globals
    for k, v in bindings.items():
        env = env_bind(env, k, v)
    r = evaluate(src, env, it)
    assert isinstance(r, ReturnedC), r
    return show(r.value)


def thrown(src: str) -> str:
    r = evaluate(src)
    assert isinstance(r, ThrewC), r
    return r.exception.name


# ---------------------------------------------------------------- corpus


def test_corpus_ships_the_expected_programs():
    expected = {
        "latch", "account", "fee_account", "fringe", "sort", "readers_writer", "monitor",
        "gcd_queue", "complex", "enum", "postpone_stream", "variadic", "json",
    }
    assert expected <= set(corpus_names())


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("variadic", ["6", "0", "9"]),
        ("enum", ["DayName.Thursday", "DayName.Monday"]),
        ("sort", ["[1, 2, 3, 7, 8, 9]"]),
        ("collections", ["[| 4, 4, 5 |]", "true", "{| 4, 5 |}", "[1, 2, [3, 4], 5, 6]", "[1, 2, 3]"]),
        ("maps", ["true", '"duplicate key"', "true", "true", '"a"', "true", '"no such key"', "[| |]"]),
        ("let_where", ["29", "384", "3", "362880", "3.0", '"cannot cast"']),
        ("interfaces", ['["ws1", "cs1"]']),
    ],
)
def test_corpus_outputs(name, expected):
    assert run_values(corpus_source(name)) == expected


def test_complex_numbers():
    real, angle, magnitude, imaginary = run_values(corpus_source("complex"))
    assert real == "1"
    assert math.isclose(float(angle), 45.0, abs_tol=1e-9)
    assert magnitude == "5.0"
    assert math.isclose(float(imaginary), 4.0, abs_tol=1e-9)


# ---------------------------------------------------------------- built-ins


@pytest.mark.parametrize(
    ("src", "expected"),
    [
        ("length([1, 2, 3])", "3"),
        ("length([| 1, 1 |])", "2"),
        ("length({| 1, 1 |})", "1"),
        ('length("abc")', "3"),
        ("empty([])", "true"),
        ("empty(map())", "true"),
        ("first([7, 8])", "7"),
        ("rest([7, 8])", "[8]"),
        ("take(2, [1, 2, 3])", "[1, 2]"),
        ("reverse([1, 2, 3])", "[3, 2, 1]"),
        ("append([1], [2], [3])", "[1, 2, 3]"),
        ("append([| 1 |], [| 1 |])", "[| 1, 1 |]"),
        ("append({| 1 |}, {| 1, 2 |})", "{| 1, 2 |}"),
        ("elements({| 3, 1, 2 |})", "[1, 2, 3]"),
        ("sqrt(16)", "4.0"),
        ("abs(-3)", "3"),
        ("arcsine(1)", "90.0"),
    ],
)
def test_builtin_values(src, expected):
    assert value(src) == expected


@pytest.mark.parametrize(
    ("src", "exception"),
    [
        ("first([])", "EmptyList"),
        ("rest([])", "EmptyList"),
        ("sqrt(-1)", "DomainError"),
        ("arcsine(1.5)", "DomainError"),
        ("arcsine(-2)", "DomainError"),
        ("append(map(1 -> 2), map(1 -> 3))", "DuplicateKey"),
        ("append([1], [| 1 |])", "TypeMismatch"),
        ('jsonParse("{")', "ParseError"),
        ("jsonParse(\"{\\\"a\\\": 1, \\\"a\\\": 2}\")", "DuplicateKey"),
        ("map(4 -> 1, 4 -> 2)", "DuplicateKey"),
        ("map(1 -> 2)(5)", "KeyNotFound"),
    ],
)
def test_builtin_exceptions(src, exception):
    assert thrown(src) == exception


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-720, max_value=720, allow_nan=False))
def test_trigonometry_is_in_degrees(d):
    assert math.isclose(float(value("sine(d)", d=d)), math.sin(math.radians(d)), abs_tol=1e-12)
    assert math.isclose(float(value("cosine(d)", d=d)), math.cos(math.radians(d)), abs_tol=1e-12)


def test_enumeration_ordinals_follow_declaration_order():
    src = "D :=: enumerate (A, B, C);; [Integer <- D.A, Integer <- D.C, D <- 1];;"
    assert run_values(src) == ["[0, 2, D.B]"]


def test_spread_of_a_non_list_is_rejected():
    src = "sum(...integers) :=: integers ?? ([] -> 0, [x, ...r] -> x + sum(...r));; sum(...5);;"
    assert run_values(src) == ["exception: TypeMismatch"]


# ---------------------------------------------------------------- JSON

json_trees = st.recursive(
    st.one_of(
        st.none(), st.booleans(), st.integers(min_value=-10**9, max_value=10**9),
        st.text(max_size=8),
    ),
    lambda kids: st.one_of(
        st.lists(kids, max_size=4),
        st.dictionaries(st.text(max_size=5), kids, max_size=4),
    ),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(json_trees)
def test_json_print_parse_round_trip(tree):
    text = json.dumps(tree)
    assert json.loads(print_json(parse_json(text))) == tree
    assert value("jsonParse(jsonPrint(jsonParse(t))) = jsonParse(t)", t=text) == "true"


def test_json_object_keys_keep_their_order():
    assert print_json(parse_json('{"b": 1, "a": 2}')) == '{"b": 1, "a": 2}'


# ---------------------------------------------------------------- maps and sets

small = st.integers(min_value=0, max_value=6)


def map_src(d) -> str:
    return "map(" + ", ".join(f"{k} -> {v}" for k, v in d.items()) + ")"


def multimap_src(d) -> str:
    return "multimap(" + ", ".join(
        f"{k} -> {{| {', '.join(map(str, vs))} |}}" for k, vs in d.items()
    ) + ")"


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(small, small, max_size=3), st.dictionaries(small, small, max_size=3),
       st.dictionaries(small, small, max_size=3))
def test_map_append_is_associative(a, b, c):
    a, b, c = map(map_src, (a, b, c))
    left = evaluate(f"append(append({a}, {b}), {c})")
    right = evaluate(f"append({a}, append({b}, {c}))")
    assert type(left) is type(right)
    if isinstance(left, ReturnedC):
        assert show(left.value) == show(right.value)
    else:
        assert left.exception.name == right.exception.name == "DuplicateKey"


multimaps = st.dictionaries(small, st.lists(small, min_size=1, max_size=3), max_size=3)


@settings(max_examples=100, deadline=None)
@given(multimaps, multimaps, multimaps)
def test_multimap_append_is_associative(a, b, c):
    a, b, c = map(multimap_src, (a, b, c))
    left = value(f"append(append({a}, {b}), {c})")
    right = value(f"append({a}, append({b}, {c}))")
    assert left == right
    assert value(f"append(append({a}, {b}), {c}) = append({a}, append({b}, {c}))") == "true"


@settings(max_examples=100, deadline=None)
@given(st.lists(small, max_size=8))
def test_multiset_counts_survive_reordering(xs):
    fwd = "[| " + ", ".join(map(str, xs)) + " |]"
    back = "[| " + ", ".join(map(str, reversed(xs))) + " |]"
    assert value(f"{fwd} = {back}") == "true"
    assert value(f"length({fwd})") == str(len(xs))
