"""Actor instances, activations, futures and postponed proxies."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any

from ..kernel.env import Thrown
from ..kernel.lazy import Deferred
from ..kernel.values import vkey


@dataclass(eq=False)
class Layer:
    """One level of an ``extends`` chain: the most derived layer comes first."""

    template: Any
    env: Any  # instance environment: rigid params, queue refs, %self
    vars: dict
    rigid: frozenset
    methods: tuple
    invariant: Any = None
    interfaces: tuple = ()


class Actor:
    """A serialized actor: at most one activity holds its cheese at a time."""

    def __init__(self, ident: str):
        self.id = ident
        self.layers: list[Layer] = []
        self.holder = None
        self.pending: deque = deque()
        self.queues: dict[str, deque] = {}
        self.handoff: deque = deque()
        self.reentry: deque = deque()
        self.interfaces: tuple = ()
        self.templates: tuple = ()
        self.forwarded_to = None

    @property
    def working(self) -> bool:
        return self.holder is not None

    def owner_layer(self, name: str, start: int = 0) -> int | None:
        for i in range(start, len(self.layers)):
            if name in self.layers[i].vars:
                return i
        return None

    def state_key(self) -> tuple:
        def ids(q):
            return tuple(a.id for a in q)

        return (
            self.id,
            tuple(tuple((k, vkey(v)) for k, v in layer.vars.items()) for layer in self.layers),
            self.holder.id if self.holder is not None else None,
            ids(self.pending),
            tuple((name, ids(q)) for name, q in self.queues.items()),
            ids(self.handoff),
            ids(self.reentry),
        )

    def grant_key(self) -> tuple:
        """What an activity learns when it is granted the cheese."""
        return (
            self.id,
            tuple(tuple((k, vkey(v)) for k, v in layer.vars.items()) for layer in self.layers),
            tuple((name, len(q)) for name, q in self.queues.items()),
        )

    def __repr__(self) -> str:
        return f"<actor {self.id}>"


class Activation:
    """One message being processed: a stable snapshot of the variables plus pending changes."""

    def __init__(self, actor: Actor, activity, seq: int):
        self.actor = actor
        self.activity = activity
        self.seq = seq
        self.change: list = []
        self.snapshot: list[dict] = []
        self.refresh()

    def refresh(self) -> None:
        self.snapshot = [dict(layer.vars) for layer in self.actor.layers]

    def read(self, name: str, layer: int, default):
        for d in self.snapshot[layer:]:
            if name in d:
                return d[name]
        return default

    def key(self) -> tuple:
        return (self.actor.id, self.activity.id, self.seq)


class FutureV(Deferred):
    """A future: the eventual outcome of a spawned activity."""

    def __init__(self, machine, ident: str, activity):
        self.machine = machine
        self.id = ident
        self.activity = activity

    def force(self):
        act = self.activity
        sched = self.machine.sched
        if act.status != "done":
            sched.wait_for(act)
        kind, value = act.outcome
        cur = sched.current
        if cur is not None:
            cur.observe(("future", self.id, kind, vkey(value)))
        if kind == "err":
            raise Thrown(value)
        return value

    def vkey(self):
        return ("F", self.id)

    def show(self) -> str:
        return f"<future {self.id}>"


class LazyProxy(Deferred):
    """``postpone e``: evaluated on first use, then permanently forwarded to its value."""

    def __init__(self, machine, ident: str, expr, env):
        self.machine = machine
        self.id = ident
        self.expr = expr
        self.env = env
        self.state = "idle"
        self.outcome = None
        self.waiters: list = []
        self.forced = 0

    def force(self):
        m = self.machine
        sched = m.sched
        while self.state == "forcing":
            self.waiters.append(sched.current)
            sched.block()
        if self.state == "idle":
            self.state = "forcing"
            self.forced += 1
            m.proxy_forces += 1
            try:
                from ..kernel.lazy import force

                self.outcome = ("ok", force(m.ev(self.expr, self.env)))
            except Thrown as t:
                self.outcome = ("err", t.value)
            self.state = "done"
            sched.event("-", "resolve", f"postpone {self.id}")
            for w in self.waiters:
                sched.wake(w, ("proxy", self.id))
            self.waiters = []
        kind, value = self.outcome
        if sched.current is not None:
            sched.current.observe(("proxy", self.id, kind, vkey(value)))
        if kind == "err":
            raise Thrown(value)
        return value

    def vkey(self):
        if self.state == "done":
            return ("P", self.id, self.outcome[0], vkey(self.outcome[1]))
        return ("P", self.id, self.state)

    def show(self) -> str:
        return f"<postponed {self.id}>"


@dataclass
class ItemResult:
    """Outcome of one top-level item."""

    kind: str  # value | error | definition
    value: Any = None
    steps: int = 0
    extra: dict = field(default_factory=dict)
