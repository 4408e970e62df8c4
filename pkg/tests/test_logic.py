import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheesescript.kernel import Thrown
from cheesescript.kernel.values import Atom, vkey
from cheesescript.logic import Theory, Var, is_ground, saturate, unify
from cheesescript.stdlib import corpus_source

from conftest import run_machine, run_values
from datalog import (
    acts_source, brute_force_saturation, key_to_literal, random_program, run_engine,
    shuffled_order, to_atom,
)


def atom(name, *args):
    return Atom(name, tuple(args))


SOCRATES = atom("Socrates")


def collect(theory, pattern):
    out = []
    theory.add_forward_rule(pattern, lambda b: out.append(b))
    return out


# ---------------------------------------------------------------- assertions and rules


def test_forward_rule_fires_for_earlier_fact():
    t = Theory("t")
    t.assert_(atom("Human", SOCRATES))
    t.add_forward_rule(atom("Human", Var("x")), lambda b: t.assert_(atom("Mortal", b["x"])))
    assert t.holds(atom("Mortal", SOCRATES))


def test_forward_rule_fires_for_later_fact():
    t = Theory("t")
    t.add_forward_rule(atom("Human", Var("x")), lambda b: t.assert_(atom("Mortal", b["x"])))
    t.assert_(atom("Human", SOCRATES))
    assert t.holds(atom("Mortal", SOCRATES))


def test_reasserting_does_not_fire_twice():
    t = Theory("t")
    fired = collect(t, atom("Human", Var("x")))
    t.assert_(atom("Human", SOCRATES))
    t.assert_(atom("Human", SOCRATES))
    assert len(fired) == 1


def test_chain_of_rules_reaches_fixpoint():
    t = Theory("t")
    t.add_forward_rule(atom("A", Var("x")), lambda b: t.assert_(atom("B", b["x"])))
    t.add_forward_rule(atom("B", Var("x")), lambda b: t.assert_(atom("C", b["x"])))
    t.assert_(atom("A", 1))
    assert t.holds(atom("C", 1))


def test_two_rules_one_fact():
    t = Theory("t")
    first = collect(t, atom("P", Var("x")))
    second = collect(t, atom("P", Var("y")))
    t.assert_(atom("P", 3))
    assert len(first) == len(second) == 1


def test_rule_without_matches_is_inert():
    t = Theory("t")
    assert collect(t, atom("Q", Var("x"))) == []
    t.assert_(atom("P", 1))
    assert not t.holds(atom("Q", 1))


def test_non_ground_assertion_is_rejected():
    with pytest.raises(Thrown) as info:
        Theory("t").assert_(atom("P", Var("x")))
    assert info.value.value.name == "NonGroundAssertion"


def test_goal_without_facts_is_empty():
    assert Theory("t").set_goal(atom("Mortal", Var("x"))) == []


def test_backward_rule_derives_on_demand():
    t = Theory("t")
    t.assert_(atom("Human", SOCRATES))

    def mortal(b):
        for f in t.set_goal(atom("Human", b["x"])):
            t.assert_(atom("Mortal", f.args[0]))

    t.add_goal_rule(atom("Mortal", Var("x")), mortal)
    assert not t.holds(atom("Mortal", SOCRATES))
    assert t.set_goal(atom("Mortal", SOCRATES)) == [atom("Mortal", SOCRATES)]


def test_goal_body_runs_once_established():
    t = Theory("t")
    seen = []
    t.set_goal(atom("Done", Var("x")), lambda b: seen.append(b["x"]))
    t.assert_(atom("Done", 1))
    t.assert_(atom("Done", 1))
    assert seen == [1]


def test_contradictions_do_not_explode():
    t = Theory("t")
    t.assert_(atom("P", 1))
    t.assert_(atom("Not", atom("P", 1)))
    assert t.query(Var("anything")) == [atom("P", 1), atom("Not", atom("P", 1))]


# ---------------------------------------------------------------- extensions


def test_extension_sees_parent_facts():
    t = Theory("t")
    t.assert_(atom("P", 1))
    assert t.extension().holds(atom("P", 1))


def test_parent_never_sees_extension_facts():
    t = Theory("t")
    child = t.extension()
    child.assert_(atom("Q", 1))
    assert not t.holds(atom("Q", 1))
    assert child.holds(atom("Q", 1))


def test_extension_rules_see_parent_facts_but_not_the_reverse():
    t = Theory("t")
    child = t.extension()
    parent_saw = collect(t, atom("Q", Var("x")))
    child_saw = collect(child, atom("Q", Var("x")))
    t.assert_(atom("Q", 1))
    child.assert_(atom("Q", 2))
    assert [b["x"] for b in parent_saw] == [1]
    assert [b["x"] for b in child_saw] == [1, 2]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=6), st.lists(st.integers(0, 5), max_size=6))
def test_extension_goals_include_parent_answers(parent_facts, child_facts):
    t = Theory("t")
    for x in parent_facts:
        t.assert_(atom("P", x))
    child = t.extension()
    for x in child_facts:
        child.assert_(atom("P", x))
    pat = atom("P", Var("x"))
    assert {vkey(f) for f in t.set_goal(pat)} <= {vkey(f) for f in child.set_goal(pat)}


def test_subargument_records_entailment():
    src = """
    s :=: theory("s");;
    t :=: theory("t");;
    |- t Greek["Plato"];;
    subargument(s, t, Human["Plato"], Human["Plato"]);;
    subargument(s, t, Human["Plato"], Greek["Plato"]);;
    ? s Entails[a, b];;
    ? t Human[h];;
    """
    assert run_values(src) == [
        "void", "true", "true",
        '[Entails[Human["Plato"], Human["Plato"]], Entails[Human["Plato"], Greek["Plato"]]]',
        "[]",
    ]


def test_failed_subargument_records_nothing():
    src = """
    s :=: theory("s");;
    t :=: theory("t");;
    subargument(s, t, Human["Plato"], Mortal["Plato"]);;
    ? s Entails[a, b];;
    """
    assert run_values(src) == ["false", "[]"]


# ---------------------------------------------------------------- unification


def test_unify_binds_variables_both_ways():
    assert unify(atom("P", Var("x"), 2), atom("P", 1, Var("y")), {}) == {"x": 1, "y": 2}
    assert unify(atom("P", 1), atom("P", 2), {}) is None
    assert is_ground(atom("P", 1)) and not is_ground(atom("P", Var("x")))


# ---------------------------------------------------------------- corpus programs


def test_socrates_programs():
    assert run_values(corpus_source("logic")) == [
        "void", "[Mortal[Socrates]]", "[]", "[Mortal[Socrates]]",
    ]


# ---------------------------------------------------------------- confluence


@pytest.mark.parametrize("seed", range(100))
def test_saturation_matches_brute_force_in_any_order(seed):
    rng = random.Random(seed)
    facts, rules = random_program(rng)
    expected = brute_force_saturation(facts, rules)
    for _ in range(3):
        assert run_engine(facts, rules, shuffled_order(rng, facts, rules)) == expected
    reference = saturate([to_atom(f) for f in facts],
                         [([to_atom(b, True) for b in body], to_atom(h, True)) for body, h in rules])
    assert reference == {vkey(to_atom(f)) for f in expected}


@pytest.mark.parametrize("seed", range(20))
def test_language_rules_agree_with_brute_force(seed):
    rng = random.Random(1000 + seed)
    facts, rules = random_program(rng)
    expected = brute_force_saturation(facts, rules)
    machine, results = run_machine(acts_source(shuffled_order(rng, facts, rules)))
    assert all(r.kind != "error" for r in results)
    derived = {key_to_literal(f) for f in machine.theories["t"].query(Var("_all"))}
    assert derived == expected
