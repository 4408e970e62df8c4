"""Random datalog programs and a brute-force saturation oracle, shared by the logic tests."""

import itertools
import random

from cheesescript.kernel.values import Atom
from cheesescript.logic import Theory, Var

CONSTANTS = ["C0", "C1", "C2", "C3"]
PREDICATES = {"P0": 1, "P1": 1, "P2": 2, "P3": 2}
VARIABLES = ["x", "y", "z"]


def random_program(rng: random.Random, n_rules: int = 10, n_facts: int = 6):
    """Range-restricted datalog: (facts, rules) over string constants."""

    def term(pool):
        return rng.choice(pool)

    def literal(pool):
        name = rng.choice(sorted(PREDICATES))
        return (name, tuple(term(pool) for _ in range(PREDICATES[name])))

    facts = {literal(CONSTANTS) for _ in range(n_facts)}
    rules = []
    while len(rules) < n_rules:
        body = [literal(VARIABLES + CONSTANTS[:1]) for _ in range(rng.randint(1, 2))]
        bound = {a for _, args in body for a in args if a in VARIABLES}
        if not bound:
            continue
        head = literal(sorted(bound))
        rules.append((body, head))
    return sorted(facts), rules


def brute_force_saturation(facts, rules) -> set:
    """Ground every rule over every constant until nothing new appears."""
    known = set(facts)
    while True:
        new = set()
        for body, head in rules:
            names = sorted({a for _, args in body for a in args if a in VARIABLES})
            for values in itertools.product(CONSTANTS, repeat=len(names)):
                sub = dict(zip(names, values))
                ground = lambda lit: (lit[0], tuple(sub.get(a, a) for a in lit[1]))  # noqa: E731
                if all(ground(b) in known for b in body):
                    new.add(ground(head))
        if new <= known:
            return known
        known |= new


def to_atom(lit, variables=False):
    name, args = lit
    return Atom(name, tuple(Var(a) if variables and a in VARIABLES else Atom(a, ()) for a in args))


def key_to_literal(fact) -> tuple:
    return (fact.name, tuple(a.name for a in fact.args))


def run_engine(facts, rules, order) -> set:
    t = Theory("t")

    def install(body, head):
        def stage(i, b):
            if i == len(body):
                t.assert_(to_atom(_subst(head, b)))
                return
            pat = to_atom(_subst(body[i], b), variables=True)
            t.add_forward_rule(pat, lambda b2: stage(i + 1, {**b, **{k: v.name for k, v in b2.items()}}))

        stage(0, {})

    for kind, x in order:
        if kind == "fact":
            t.assert_(to_atom(x))
        else:
            install(*x)
    return {key_to_literal(f) for f in t.query(Var("_all"))}


def _subst(lit, b):
    name, args = lit
    return (name, tuple(b.get(a, a) for a in args))


def shuffled_order(rng, facts, rules):
    order = [("fact", f) for f in facts] + [("rule", r) for r in rules]
    rng.shuffle(order)
    return order


def acts_source(order) -> str:
    """The same program as surface syntax, rules written as nested ``when``."""

    def pattern(lit, bound):
        name, args = lit
        parts = []
        for a in args:
            if a not in VARIABLES:
                parts.append(a)
            elif a in bound:
                parts.append(f"={a.lower()}")
            else:
                parts.append(a.lower())
        return f"{name}[{', '.join(parts)}]"

    def rule(body, head):
        bound: set = set()
        text = ""
        closes = 0
        for lit in body:
            text += f"when |- t {pattern(lit, bound)} -> ("
            closes += 1
            bound |= {a for a in lit[1] if a in VARIABLES}
        head_name, head_args = head
        return text + f"|- t {head_name}[{', '.join(head_args)}]" + ")" * closes

    lines = []
    for kind, x in order:
        if kind == "fact":
            lines.append(f"|- t {x[0]}[{', '.join(x[1])}];;")
        else:
            lines.append(rule(*x) + ";;")
    return "\n".join(lines)
