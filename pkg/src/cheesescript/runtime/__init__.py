"""Serialized-actor runtime: scheduler, actors, futures and interleaving exploration."""

from __future__ import annotations

from ..kernel.evaluator import Deadlock, StepLimitExceeded
from ..syntax import parse_program
from .actors import Activation, Actor, FutureV, ItemResult, LazyProxy
from .explore import Exploration, explore_interleavings, outcome_text, sort_results
from .machine import Machine, deep_resolve, run_with_big_stack
from .scheduler import DEFAULT_STEP_LIMIT, Activity, Scheduler


def scheduler_run(program, seed: int = 0, step_limit: int = DEFAULT_STEP_LIMIT, trace: bool = True):
    """Run a whole program under one seed; returns (results, trace lines).

    A ``StepLimitExceeded`` (or ``Deadlock``) escapes with ``results`` and
    ``trace`` attributes attached so the failure can be diagnosed.
    """
    items = parse_program(program) if isinstance(program, str) else list(program)
    machine = Machine(seed=seed, step_limit=step_limit, trace=trace)
    results: list[ItemResult] = []

    def go():
        for item in items:
            r = machine.run_item(item)
            results.append(r)
            if r.kind == "error":
                break

    try:
        run_with_big_stack(go)
    except StepLimitExceeded as ex:
        ex.results = results
        ex.trace = machine.sched.trace
        raise
    return results, machine.sched.trace


def send(machine: Machine, ref, selector: str, args=(), kwargs=None) -> FutureV:
    """Send a message as a new activity and return the future for its outcome."""
    parent = machine.sched.current
    act = machine.sched.spawn(
        lambda: machine.actor_send(ref, selector, list(args), dict(kwargs or {})),
        parent=parent,
        root=len(machine.sched.activities) if parent is None else 0,
    )
    return FutureV(machine, act.id, act)


__all__ = [
    "DEFAULT_STEP_LIMIT", "Activation", "Activity", "Actor", "Deadlock", "Exploration",
    "FutureV", "ItemResult", "LazyProxy", "Machine", "Scheduler", "StepLimitExceeded",
    "deep_resolve", "explore_interleavings", "outcome_text", "run_with_big_stack",
    "scheduler_run", "send", "sort_results",
]
