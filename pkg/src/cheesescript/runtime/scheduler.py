"""Deterministic cooperative scheduler.

Each activity runs in its own greenlet, so the evaluator can stay a plain
recursive tree-walker and still suspend in the middle of an expression.
Activities hand control back to the scheduler loop at visible operations
(message arrival, hole re-entry, logic operations) and when they block.  The
loop picks the next ready activity with a seeded RNG, or with an external
chooser during exhaustive exploration.
"""

from __future__ import annotations

import random
from typing import Callable

from greenlet import greenlet

from ..kernel.env import Thrown
from ..kernel.evaluator import StepLimitExceeded
from ..kernel.values import vkey

DEFAULT_STEP_LIMIT = 1_000_000


class Activity:
    __slots__ = (
        "id", "key", "glet", "status", "outcome", "waiters", "n_children",
        "n_made", "n_act", "h", "done_seq",
    )

    def __init__(self, ident: str, key: tuple):
        self.id = ident
        self.key = key
        self.glet = None
        self.status = "ready"
        self.outcome = None  # ("ok", value) | ("err", exception value)
        self.waiters: list[Activity] = []
        self.n_children = 0
        self.n_made = 0
        self.n_act = 0
        self.h = hash(ident)
        self.done_seq = -1

    def fresh_name(self, kind: str) -> str:
        """Deterministic id for an actor, future or proxy created by this activity."""
        self.n_made += 1
        return f"{self.id}-{self.n_made}" if kind == "actor" else f"{self.id}{kind}{self.n_made}"

    def observe(self, value) -> None:
        """Fold an input this activity received into its history hash."""
        self.h = hash((self.h, value))

    def __repr__(self) -> str:
        return f"<activity {self.id} {self.status}>"


class Scheduler:
    def __init__(
        self,
        seed: int = 0,
        step_limit: int = DEFAULT_STEP_LIMIT,
        chooser: Callable[[list], int] | None = None,
        trace: bool = False,
    ):
        self.rng = random.Random(seed)
        self.step_limit = step_limit
        self.chooser = chooser
        self.trace_on = trace
        self.trace: list[str] = []
        self.ready: list[Activity] = []
        self.activities: list[Activity] = []
        self.steps = 0
        self.current: Activity | None = None
        self.main = None
        self.crash: BaseException | None = None
        self._done = 0

    # ------------------------------------------------------------ events

    def event(self, actor: str, kind: str, detail: str) -> None:
        if self.trace_on:
            by = self.current.id if self.current is not None else "-"
            self.trace.append(f"step={self.steps} actor={actor} event={kind} detail={detail} by={by}")

    # ------------------------------------------------------------ activities

    def spawn(self, fn: Callable[[], object], parent: Activity | None = None, root: int = 0) -> Activity:
        if parent is None:
            act = Activity(f"a{root}", (root,))
        else:
            parent.n_children += 1
            act = Activity(f"{parent.id}.{parent.n_children}", parent.key + (parent.n_children,))
        if parent is None and self._done == len(self.activities):
            # Nothing is suspended, so a caller on another thread can take over.
            self.main = greenlet.getcurrent()
        act.glet = greenlet(self._wrap(act, fn), parent=self.main)
        self.activities.append(act)
        self.ready.append(act)
        return act

    def _wrap(self, act: Activity, fn):
        def run():
            try:
                act.outcome = ("ok", fn())
            except Thrown as t:
                act.outcome = ("err", t.value)
            except Exception as ex:  # interpreter bug or step limit: surface in the main loop
                act.outcome = ("err", None)
                self.crash = ex
            act.status = "done"
            self._done += 1
            act.done_seq = self._done
            self.event("-", "resolve", f"{act.id} {act.outcome[0]}")
            for w in act.waiters:
                self.wake(w, ("done", act.id))
            act.waiters = []

        return run

    def yield_(self) -> None:
        """Give the scheduler a chance to run another activity first."""
        cur = self.current
        if cur is None:
            return
        if not self.ready:
            # No choice to make, but the visible operation still costs a step.
            self.steps += 1
            if self.steps > self.step_limit:
                raise StepLimitExceeded(f"step limit {self.step_limit} exceeded")
            return
        cur.observe("yield")
        cur.status = "ready"
        self.ready.append(cur)
        self.main.switch()

    def block(self) -> None:
        cur = self.current
        if cur is None:
            raise RuntimeError("block() outside an activity")
        cur.observe("block")
        cur.status = "blocked"
        self.main.switch()

    def wake(self, act: Activity, observed=None) -> None:
        if observed is not None:
            act.observe(observed)
        if act.status == "blocked":
            act.status = "ready"
            self.ready.append(act)

    def wait_for(self, act: Activity) -> None:
        """Block the current activity until ``act`` has finished."""
        while act.status != "done":
            act.waiters.append(self.current)
            self.block()

    # ------------------------------------------------------------ main loop

    def choose(self) -> Activity:
        ready = self.ready
        if len(ready) == 1:
            return ready.pop()
        ready.sort(key=lambda a: a.key)
        if self.chooser is not None:
            idx = self.chooser(ready)
        else:
            idx = self.rng.randrange(len(ready))
        return ready.pop(idx)

    def run(self) -> None:
        """Run until no activity is ready."""
        if self.main is None:
            self.main = greenlet.getcurrent()
        while self.ready:
            act = self.choose()
            self.steps += 1
            if self.steps > self.step_limit:
                raise StepLimitExceeded(f"step limit {self.step_limit} exceeded")
            self.current = act
            act.status = "running"
            act.glet.switch()
            self.current = None
            if self.crash is not None:
                crash, self.crash = self.crash, None
                if isinstance(crash, RecursionError):
                    raise StepLimitExceeded("evaluation nested too deeply") from None
                raise crash

    def state_key(self) -> tuple:
        out = []
        for a in self.activities:
            if a.status == "done":
                o = a.outcome
                out.append((a.id, "done", (o[0], vkey(o[1]))))
            else:
                out.append((a.id, a.status, a.h))
        out.sort()
        return tuple(out)
