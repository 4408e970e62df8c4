"""Shared helpers for running cheesescript source in tests."""

from __future__ import annotations

import re

import pytest

from cheesescript.kernel.values import Atom, show
from cheesescript.runtime import Machine, run_with_big_stack
from cheesescript.stdlib import corpus_source
from cheesescript.syntax import parse_program


def run_values(source: str, seed: int = 0, step_limit: int = 1_000_000) -> list[str]:
    """Printed value of every non-definition item; an uncaught exception shows as ``exception: Name``."""
    machine = Machine(seed=seed, step_limit=step_limit)

    def go():
        out = []
        for r in machine.run_program(parse_program(source)):
            if r.kind == "value":
                out.append(show(r.value))
            elif r.kind == "error":
                v = r.value
                out.append(f"exception: {v.name if type(v) is Atom else show(v)}")
        return out

    return run_with_big_stack(go)


def run_machine(source: str, seed: int = 0, step_limit: int = 1_000_000, trace: bool = False):
    """Run a program and hand back the machine together with the item results."""
    machine = Machine(seed=seed, step_limit=step_limit, trace=trace)
    results = run_with_big_stack(lambda: machine.run_program(parse_program(source)))
    return machine, results


def last_value(source: str, seed: int = 0) -> str:
    return run_values(source, seed)[-1]


@pytest.fixture
def corpus():
    return corpus_source


_EVENT = re.compile(r"step=(\d+) actor=(\S+) event=(\S+) detail=(.*) by=(\S+)$")


def parse_trace(lines):
    """Trace lines as (step, actor, kind, detail, by) tuples."""
    out = []
    for line in lines:
        m = _EVENT.match(line)
        assert m, line
        out.append((int(m[1]), m[2], m[3], m[4], m[5]))
    return out


def cheese_violations(lines) -> list[str]:
    """Places where an actor's cheese was taken while held, or released by a non-holder."""
    holder: dict[str, str | None] = {}
    bad = []
    for step, actor, kind, detail, by in parse_trace(lines):
        if kind == "acquire":
            who = by if detail in ("arrival", "reentry") else detail
            if holder.get(actor) is not None:
                bad.append(f"step {step}: {who} acquired {actor} held by {holder[actor]}")
            holder[actor] = who
        elif kind == "release":
            if holder.get(actor) != by:
                bad.append(f"step {step}: {by} released {actor} held by {holder.get(actor)}")
            holder[actor] = None
    return bad


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""

    def emit(number: int, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        print(line)
        _CRITERIA[number] = line
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
