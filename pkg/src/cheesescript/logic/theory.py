"""Theories: assertions plus forward (``when |-``) and backward (``when ?``) chaining.

Propositions are ``Atom`` values whose arguments are ground values.  Patterns
are atoms whose arguments may also be ``Var``.  Rule and goal bodies are
plain callables taking a binding dict, so this module knows nothing about
the interpreter.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from ..kernel.env import throw
from ..kernel.values import Atom, vkey


@dataclass(frozen=True)
class Var:
    """A logic variable inside a pattern."""

    name: str


def is_ground(term) -> bool:
    if type(term) is Var:
        return False
    if type(term) is Atom:
        return all(is_ground(a) for a in term.args)
    return True


def match_term(pattern, fact, bindings: dict):
    """One-way match of a pattern against a ground fact; returns new bindings or None."""
    if type(pattern) is Var:
        if pattern.name.startswith("_"):
            return bindings
        if pattern.name in bindings:
            return bindings if vkey(bindings[pattern.name]) == vkey(fact) else None
        out = dict(bindings)
        out[pattern.name] = fact
        return out
    if type(pattern) is Atom:
        if type(fact) is not Atom or fact.name != pattern.name or len(fact.args) != len(pattern.args):
            return None
        for p, f in zip(pattern.args, fact.args):
            bindings = match_term(p, f, bindings)
            if bindings is None:
                return None
        return bindings
    return bindings if vkey(pattern) == vkey(fact) else None


def unify(a, b, bindings: dict):
    """Unify two flat terms (used to connect goals with goal rules)."""
    a = _walk(a, bindings)
    b = _walk(b, bindings)
    if type(a) is Var:
        if a.name.startswith("_"):
            return bindings
        if type(b) is Var and b.name == a.name:
            return bindings
        out = dict(bindings)
        out[a.name] = b
        return out
    if type(b) is Var:
        return unify(b, a, bindings)
    if type(a) is Atom and type(b) is Atom:
        if a.name != b.name or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            bindings = unify(x, y, bindings)
            if bindings is None:
                return None
        return bindings
    return bindings if vkey(a) == vkey(b) else None


def _walk(t, bindings):
    while type(t) is Var and t.name in bindings:
        t = bindings[t.name]
    return t


def substitute(term, bindings: dict):
    term = _walk(term, bindings)
    if type(term) is Atom and term.args:
        return Atom(term.name, tuple(substitute(a, bindings) for a in term.args))
    return term


def _binding_key(bindings: dict):
    return tuple(sorted((k, vkey(v) if type(v) is not Var else ("var", v.name)) for k, v in bindings.items()))


@dataclass(eq=False)
class _Rule:
    pattern: object
    body: Callable[[dict], object]
    uid: int


class Theory:
    """A named store of assertions; an extension sees its parent's assertions."""

    def __init__(self, name: str, parent: "Theory | None" = None):
        self.name = name
        self.parent = parent
        self.children: list[Theory] = []
        self.facts: dict = {}
        self.forward_rules: list[_Rule] = []
        self.goal_rules: list[_Rule] = []
        self.goals: list[_Rule] = []  # active goals; body may be None
        self.fired: set = set()
        if parent is not None:
            parent.children.append(self)
        self._agenda: deque = deque()
        self._running = False
        self._uids = 0

    def _new_uid(self) -> int:
        self._uids += 1
        return self._uids

    # ------------------------------------------------------------ queries

    def visible_facts(self) -> list:
        out = self.parent.visible_facts() if self.parent is not None else []
        return out + [f for k, f in self.facts.items()]

    def holds(self, prop) -> bool:
        t = self
        key = vkey(prop)
        while t is not None:
            if key in t.facts:
                return True
            t = t.parent
        return False

    def query(self, pattern) -> list:
        """All visible assertions matching ``pattern``, in assertion order."""
        out, seen = [], set()
        for f in self.visible_facts():
            if match_term(pattern, f, {}) is not None and vkey(f) not in seen:
                seen.add(vkey(f))
                out.append(f)
        return out

    def extension(self, name: str | None = None) -> "Theory":
        return Theory(name or f"{self.name}'", self)

    def lineage(self) -> Iterable["Theory"]:
        """This theory and all its extensions."""
        yield self
        for c in self.children:
            yield from c.lineage()

    # ------------------------------------------------------------ updates

    def assert_(self, prop) -> None:
        if not is_ground(prop):
            raise throw("NonGroundAssertion", prop)
        if self.holds(prop):
            return
        self.facts[vkey(prop)] = prop
        for t in self.lineage():
            self._schedule_fact(t, prop)
        self._run()

    def add_forward_rule(self, pattern, body) -> None:
        rule = _Rule(pattern, body, self._new_uid())
        self.forward_rules.append(rule)
        for f in self.visible_facts():
            self._try_fire(rule, f)
        self._run()

    def add_goal_rule(self, pattern, body) -> None:
        rule = _Rule(pattern, body, self._new_uid())
        self.goal_rules.append(rule)
        for g in self._visible_goals():
            self._try_goal_rule(rule, g.pattern)
        self._run()

    def set_goal(self, pattern, body=None) -> list:
        """Register a goal; returns the assertions that currently satisfy it."""
        goal = _Rule(pattern, body, self._new_uid())
        self.goals.append(goal)
        for t in self._theories_seeing_goals():
            for rule in t.goal_rules:
                self._try_goal_rule(rule, pattern)
        if body is not None:
            for f in self.visible_facts():
                self._try_fire(goal, f)
        self._run()
        return self.query(pattern)

    # ------------------------------------------------------------ engine

    def _visible_goals(self):
        t = self
        while t is not None:
            yield from t.goals
            t = t.parent

    def _theories_seeing_goals(self):
        t = self
        while t is not None:
            yield t
            t = t.parent

    def _schedule_fact(self, t: "Theory", prop) -> None:
        for rule in t.forward_rules:
            t._try_fire(rule, prop)
        for goal in t.goals:
            if goal.body is not None:
                t._try_fire(goal, prop)

    def _try_fire(self, rule: _Rule, fact) -> None:
        b = match_term(rule.pattern, fact, {})
        if b is None:
            return
        key = (rule.uid, _binding_key(b))
        if key in self.fired:
            return
        self.fired.add(key)
        self._agenda.append((rule.body, b))

    def _try_goal_rule(self, rule: _Rule, goal_pattern) -> None:
        b = unify(rule.pattern, goal_pattern, {})
        if b is None:
            return
        b = {k: substitute(v, b) for k, v in b.items() if k in _vars(rule.pattern)}
        b = {k: v for k, v in b.items() if type(v) is not Var}
        key = (rule.uid, _binding_key(b))
        if key in self.fired:
            return
        self.fired.add(key)
        self._agenda.append((rule.body, b))

    def _run(self) -> None:
        if self._running:
            return
        self._running = True
        try:
            while True:
                pending = next((t for t in self._family() if t._agenda), None)
                if pending is None:
                    break
                body, b = pending._agenda.popleft()
                body(b)
        finally:
            self._running = False

    def _family(self):
        root = self
        while root.parent is not None:
            root = root.parent
        return root.lineage()


def _vars(term) -> set:
    if type(term) is Var:
        return {term.name}
    if type(term) is Atom:
        out = set()
        for a in term.args:
            out |= _vars(a)
        return out
    return set()


def saturate(facts: Iterable, rules: Iterable[tuple]) -> set:
    """Reference forward-chaining fixpoint for datalog-style rules.

    ``rules`` holds (body_patterns, head_pattern) pairs; returns the set of
    fact keys.  Used as an oracle for the chaining engine.
    """
    known = {vkey(f): f for f in facts}
    rules = list(rules)
    changed = True
    while changed:
        changed = False
        for body, head in rules:
            for b in _join(body, list(known.values()), {}):
                new = substitute(head, b)
                if is_ground(new) and vkey(new) not in known:
                    known[vkey(new)] = new
                    changed = True
    return set(known)


def _join(patterns, facts, bindings):
    if not patterns:
        yield bindings
        return
    first, rest = patterns[0], patterns[1:]
    for f in facts:
        b = match_term(substitute(first, bindings), f, bindings)
        if b is not None:
            yield from _join(rest, facts, b)
