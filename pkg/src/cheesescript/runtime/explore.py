"""Exhaustive exploration of scheduler choices.

Each run replays a prefix of choices and then always takes the first ready
activity; afterwards the untried alternatives at every new choice point are
pushed onto a stack.  A state fingerprint taken at each fresh choice point
prunes runs that reach a state some earlier run already expanded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..kernel.evaluator import Deadlock, StepLimitExceeded
from ..kernel.values import Atom, show
from ..syntax import parse_program
from .machine import Machine, run_with_big_stack


class _Pruned(Exception):
    pass


@dataclass
class Exploration:
    """What an exhaustive exploration found."""

    results: set = field(default_factory=set)
    runs: int = 0
    pruned: int = 0
    partial: bool = False
    invariant_failures: int = 0

    def sorted_results(self) -> list[str]:
        return sort_results(self.results)

    def show(self) -> str:
        return "{" + ", ".join(self.sorted_results()) + "}"


def sort_results(results) -> list[str]:
    """Numbers in numeric order first, then everything else alphabetically."""

    def key(s: str):
        try:
            return (0, float(s), s)
        except ValueError:
            return (1, 0.0, s)

    return sorted(results, key=key)


def outcome_text(machine: Machine, items) -> str:
    """Run ``items`` and describe how the program ended."""
    try:
        results = machine.run_program(items)
    except Deadlock:
        return "deadlock"
    except StepLimitExceeded:
        return "step limit"
    last = results[-1] if results else None
    if last is None:
        return "void"
    if last.kind == "error":
        v = last.value
        return f"exception: {v.name if type(v) is Atom else show(v)}"
    return show(last.value) if last.kind == "value" else "void"


def _explore(items, bound: int, step_limit: int, on_run, seed: int, prune: bool) -> Exploration:
    out = Exploration()
    seen: set = set()
    stack: list[list[int]] = [[]]
    while stack:
        if out.runs >= bound:
            out.partial = True
            break
        prefix = stack.pop()
        trail: list[tuple[int, int]] = []
        holder: dict = {}

        def chooser(ready, prefix=prefix, trail=trail, holder=holder):
            depth = len(trail)
            if depth < len(prefix):
                idx = prefix[depth]
            else:
                if prune:
                    fp = holder["m"].fingerprint()
                    if fp in seen:
                        raise _Pruned()
                    seen.add(fp)
                idx = 0
            trail.append((idx, len(ready)))
            return idx

        machine = Machine(seed=seed, step_limit=step_limit, chooser=chooser)
        holder["m"] = machine
        out.runs += 1
        try:
            text = outcome_text(machine, items)
        except _Pruned:
            out.pruned += 1
            text = None
        if text is not None:
            out.results.add(text)
            out.invariant_failures += len(machine.invariant_failures)
            if on_run is not None:
                on_run(machine, text)
        base = [c for c, _ in trail]
        for depth in range(len(trail) - 1, len(prefix) - 1, -1):
            chosen, n = trail[depth]
            for alt in range(n - 1, chosen, -1):
                stack.append(base[:depth] + [alt])
    return out


def explore_interleavings(
    program,
    bound: int = 100_000,
    step_limit: int = 100_000,
    on_run: Callable | None = None,
    seed: int = 0,
    prune: bool = True,
) -> Exploration:
    """Explore every scheduling of ``program`` (source text or parsed items).

    ``on_run(machine, outcome)`` is called after every complete run, which lets
    callers inspect actor state or invariant records.  When more than
    ``bound`` runs would be needed the result is marked ``partial``.
    ``prune=False`` disables state fingerprinting and enumerates every
    schedule, which is only practical for small programs.
    """
    items = parse_program(program) if isinstance(program, str) else list(program)
    return run_with_big_stack(_explore, items, bound, step_limit, on_run, seed, prune)
