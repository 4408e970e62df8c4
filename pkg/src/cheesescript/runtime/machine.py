"""The actor runtime: an ``Interpreter`` whose hooks run on the scheduler.

Every top-level item runs as a root activity.  Blocks with ``,`` separators,
``future`` and plain message sends create or suspend activities; an actor's
cheese is modelled by ``Actor.holder`` plus three waiting lines (handoff from
``dequeue``, re-entry after a hole, and fresh arrivals).
"""

from __future__ import annotations

import sys
import threading
from collections import deque
from functools import partial

from ..kernel.env import (
    _MISSING, RecFrame, Thrown, VarFrame, env_bind, env_find, find_var_frame, throw,
)
from ..kernel.evaluator import Deadlock, Interpreter
from ..kernel.lazy import force, list_items
from ..kernel.types import check_type
from ..kernel.values import (
    VOID, ActorRef, ActorTemplate, Atom, InterfaceV, InterfaceView, ListV, NullOf,
    QueueRef, StructV, TheoryV, show, vkey,
)
from ..logic import Theory, Var
from ..syntax import ast as A
from .actors import Activation, Actor, FutureV, ItemResult, Layer, LazyProxy
from .scheduler import DEFAULT_STEP_LIMIT, Scheduler

_CATCH_KINDS = ("catch", "catch-else", "rethrow")


def _binders(p) -> list[str]:
    """Names bound by a pattern, left to right."""
    t = type(p)
    if t is A.PBind:
        return [p.name]
    if t in (A.PAnd, A.POr):
        return _binders(p.left) + _binders(p.right)
    if t is A.PThatIs:
        return _binders(p.base) + _binders(p.pred)
    if t is A.PList:
        return [n for x, _ in p.items for n in _binders(x)]
    if t is A.PKeyword:
        return [n for _, x in p.args for n in _binders(x)]
    if t is A.PProp:
        return [n for x in p.args for n in _binders(x)]
    return []


def _assigned_names(node, out: set) -> set:
    """Every variable assigned by an also/prep command anywhere inside ``node``."""
    if type(node) is A.Assign:
        out.add(node.name)
    if isinstance(node, A.Node):
        for value in vars(node).values():
            _assigned_names(value, out)
    elif type(node) in (tuple, list):
        for x in node:
            _assigned_names(x, out)
    return out


class Machine(Interpreter):
    """Interpreter plus scheduler, actors, futures, proxies and theories."""

    def __init__(self, seed: int = 0, step_limit: int = DEFAULT_STEP_LIMIT, trace: bool = False, chooser=None):
        super().__init__(fuel_limit=max(step_limit * 10, 10**6))
        self.sched = Scheduler(seed, step_limit, chooser, trace)
        self.actors: list[Actor] = []
        self.proxies: list[LazyProxy] = []
        self.theories: dict[str, Theory] = {}
        self.proxy_forces = 0
        self.invariant_checks = 0
        self.invariant_failures: list[tuple] = []
        self.item_index = 0
        self._logic_depth = 0
        from ..stdlib.builtins import install

        base = RecFrame(None, is_global=True)
        install(self, base)
        self.globals = RecFrame(base, is_global=True)

    # ------------------------------------------------------------ top level

    def run_item(self, item) -> ItemResult:
        """Run one top-level item to quiescence; raises Deadlock if it cannot finish."""
        idx = self.item_index
        self.item_index += 1
        sched = self.sched
        where: dict = {}

        def body():
            try:
                if type(item) is A.Define:
                    self.define(item, self.globals)
                    return VOID
                return deep_resolve(self.ev(item, self.globals))
            except Thrown as t:
                where["span"] = t.span
                raise

        root = sched.spawn(body, root=idx)
        sched.run()
        if root.status != "done":
            blocked = sorted(a.id for a in sched.activities if a.status == "blocked")
            raise Deadlock("deadlock: blocked activities " + ", ".join(blocked))
        kind, value = root.outcome
        if kind == "err":
            return ItemResult("error", value, sched.steps, {"span": where.get("span") or item.span})
        if type(item) is A.Define:
            return ItemResult("definition", item.target.name, sched.steps)
        return ItemResult("value", value, sched.steps)

    def run_program(self, items) -> list[ItemResult]:
        """Run items in order, stopping after the first uncaught exception."""
        out = []
        for item in items:
            r = self.run_item(item)
            out.append(r)
            if r.kind == "error":
                break
        return out

    # ------------------------------------------------------------ actors: spawning

    def spawn(self, template, args, kwargs):
        cur = self.sched.current
        ident = cur.fresh_name("actor") if cur is not None else f"g-{len(self.actors) + 1}"
        actor = Actor(ident)
        ref = ActorRef(actor)
        self._build_layers(actor, ref, template, args, kwargs)
        actor.templates = tuple(layer.template for layer in actor.layers)
        actor.interfaces = tuple(i for layer in actor.layers for i in layer.interfaces)
        self.actors.append(actor)
        self.sched.event(actor.id, "spawn", template.name or "actor")
        if not self.check_invariant(actor, "construct"):
            raise throw("InvariantViolation", actor.id)
        return ref

    def _build_layers(self, actor: Actor, ref: ActorRef, template: ActorTemplate, args, kwargs):
        decl = template.decl
        env, bound = self.bind_params(decl.params, args, kwargs, template.env)
        if env is None:
            raise throw("TypeMismatch" if bound == "type" else "MatchFailure", template.name or "actor")
        variables, rigid = {}, set()
        for p, _ in bound:
            names = _binders(p.pattern)
            if p.rigid:
                rigid.update(names)
            else:
                for n in names:
                    variables[n] = env_find(env, n)
        for q in decl.queue_names:
            actor.queues.setdefault(q, deque())
            env = env_bind(env, q, QueueRef(actor, q))
        env = env_bind(env, "%self", ref)
        venv = env
        for vd in decl.var_decls:
            v = self.ev(vd.init, venv)
            if vd.type is not None and not check_type(v, vd.type, venv):
                raise throw("TypeMismatch", vd.name, v)
            variables[vd.name] = v
            venv = env_bind(venv, vd.name, v)
        bad = _assigned_names(decl.methods, set()) & rigid
        if bad:
            raise throw("RigidAssignment", sorted(bad)[0])
        ifaces = []
        for x in decl.implements:
            iv = force(self.ev(x, env))
            if type(iv) is not InterfaceV:
                raise throw("TypeMismatch", "interface", iv)
            ifaces.append(iv)
        actor.layers.append(Layer(template, env, variables, frozenset(rigid), decl.methods, decl.invariant, tuple(ifaces)))
        ext = decl.extends
        if ext is not None:
            if type(ext) is A.Call:
                base = force(self.ev(ext.callee, env))
                bargs, bkw = self.eval_args(ext.args, env)
            else:
                base, bargs, bkw = force(self.ev(ext, env)), [], {}
            if type(base) is not ActorTemplate:
                raise throw("TypeMismatch", "actor", base)
            self._build_layers(actor, ref, base, bargs, bkw)

    def actor_responds(self, ref, selector) -> bool:
        return any(m.selector == selector for layer in ref.actor.layers for m in layer.methods)

    # ------------------------------------------------------------ actors: messages

    def _activation(self, actor: Actor, act) -> Activation:
        act.n_act += 1
        return Activation(actor, act, act.n_act)

    def actor_send(self, ref, selector, args, kwargs):
        actor = ref.actor
        act = self.sched.current
        if act is None:
            raise throw("NotInActor", selector)
        if actor.holder is act:
            # a message to an actor whose cheese this activity already holds
            return self._dispatch_nested(actor, 0, selector, args, kwargs)
        self.sched.yield_()
        self._acquire(actor, act)
        activation = self._activation(actor, act)
        self.sched.event(actor.id, "dispatch", selector)
        found = self._select(actor, activation, 0, selector, args, kwargs)
        if found is None:
            self._release(actor, activation)
            raise throw("NotApplicable", selector)
        m, env = found
        self.tick()
        try:
            v = self.ev(m.body, env)
        except Thrown:
            if actor.holder is act:
                self._release(actor, activation)
            raise
        if not self._release(actor, activation):
            raise throw("InvariantViolation", actor.id)
        return v

    def _select(self, actor: Actor, activation: Activation, start: int, selector, args, kwargs):
        for li in range(start, len(actor.layers)):
            layer = actor.layers[li]
            base = VarFrame(activation, li, layer.env)
            for m in layer.methods:
                if m.selector != selector and m.selector != "?":
                    continue
                env = self.bind_method(m, args, kwargs, base)
                if env is not None:
                    return m, env
        return None

    def _dispatch_nested(self, actor: Actor, start: int, selector, args, kwargs):
        """Run a method inside the cheese already held; its change applies immediately."""
        act = self.sched.current
        sub = self._activation(actor, act)
        self.sched.event(actor.id, "dispatch", selector)
        found = self._select(actor, sub, start, selector, args, kwargs)
        if found is None:
            raise throw("NotApplicable", selector)
        m, env = found
        self.tick()
        try:
            return self.ev(m.body, env)
        finally:
            self._apply_change(actor, sub)

    def _acquire(self, actor: Actor, act) -> None:
        if actor.holder is None:
            actor.holder = act
            self.sched.event(actor.id, "acquire", "arrival")
            act.observe(("grant", actor.grant_key()))
        else:
            actor.pending.append(act)
            self.sched.event(actor.id, "enqueue", "pending")
            self.sched.block()

    def _reacquire(self, actor: Actor, act) -> None:
        self.sched.yield_()
        if actor.holder is None:
            actor.holder = act
            self.sched.event(actor.id, "acquire", "reentry")
            act.observe(("grant", actor.grant_key()))
        else:
            actor.reentry.append(act)
            self.sched.event(actor.id, "enqueue", "reentry")
            self.sched.block()

    def _apply_change(self, actor: Actor, activation: Activation) -> None:
        change, activation.change = activation.change, []
        for op in change:
            if op[0] == "assign":
                _, li, name, v = op
                actor.layers[li].vars[name] = v
        for op in change:
            if op[0] == "dequeue":
                self._dequeue(actor, op[1])

    def _dequeue(self, actor: Actor, q) -> None:
        q = force(q)
        if type(q) is NullOf:
            return
        if type(q) is not QueueRef:
            raise throw("TypeMismatch", "Queue", q)
        waiting = q.actor.queues[q.name]
        if waiting:
            head = waiting.popleft()
            q.actor.handoff.append(head)
            self.sched.event(q.actor.id, "dequeue", f"{q.name} {head.id}")

    def _release(self, actor: Actor, activation: Activation) -> bool:
        """Apply the change, check the invariant and pass the cheese on."""
        self._apply_change(actor, activation)
        ok = True
        if not actor.handoff:
            ok = self.check_invariant(actor, "release")
        actor.holder = None
        self.sched.event(actor.id, "release", "")
        self._grant_next(actor)
        return ok

    def _grant_next(self, actor: Actor) -> None:
        for line in (actor.handoff, actor.reentry, actor.pending):
            if line:
                nxt = line.popleft()
                actor.holder = nxt
                self.sched.event(actor.id, "acquire", nxt.id)
                self.sched.wake(nxt, ("grant", actor.grant_key()))
                return

    def check_invariant(self, actor: Actor, where: str) -> bool:
        self.invariant_checks += 1
        ok = True
        probe = Activation(actor, self.sched.current, -1)
        for li, layer in enumerate(actor.layers):
            if layer.invariant is None:
                continue
            try:
                good = self.truth(self.ev(layer.invariant, VarFrame(probe, li, layer.env)))
            except Thrown:
                good = False
            ok = ok and good
        self.sched.event(actor.id, "invariant-check", f"{where} {'ok' if ok else 'violated'}")
        if not ok:
            self.invariant_failures.append((actor.id, where, self.sched.steps))
        return ok

    def _held_frame(self, env, what: str) -> VarFrame:
        vf = find_var_frame(env)
        if vf is None or vf.activation.actor.holder is not self.sched.current:
            raise throw("NotInActor", what)
        return vf

    # ------------------------------------------------------------ commands

    def _command_value(self, cmd, env):
        return self.ev(cmd.expr, env)

    def perform_commands(self, commands, env):
        if not commands:
            return
        vf = self._held_frame(env, "also")
        activation, actor = vf.activation, vf.activation.actor
        for cmd in commands:
            t = type(cmd)
            if t is A.Assign:
                li = actor.owner_layer(cmd.name, vf.layer)
                if li is None:
                    if any(cmd.name in layer.rigid for layer in actor.layers):
                        raise throw("RigidAssignment", cmd.name)
                    raise throw("NotFound", cmd.name)
                activation.change.append(("assign", li, cmd.name, self.ev(cmd.expr, env)))
            elif t is A.DequeueCmd:
                activation.change.append(("dequeue", self.ev(cmd.queue, env)))
            else:
                self._expr_command(cmd.expr, env)

    def _expr_command(self, x, env):
        if type(x) is A.Conditional:
            self.ev_conditional(x, env, as_command=True)
        else:
            self.ev(x, env)

    def _prep_commands(self, commands, env, vf: VarFrame):
        activation, actor = vf.activation, vf.activation.actor
        for cmd in commands:
            t = type(cmd)
            if t is A.Assign:
                li = actor.owner_layer(cmd.name, vf.layer)
                if li is None:
                    raise throw("RigidAssignment" if any(cmd.name in l.rigid for l in actor.layers) else "NotFound", cmd.name)
                v = self.ev(cmd.expr, env)
                actor.layers[li].vars[cmd.name] = v
                activation.snapshot[li][cmd.name] = v
            elif t is A.DequeueCmd:
                self._dequeue(actor, self.ev(cmd.queue, env))
            else:
                self._expr_command(cmd.expr, env)

    # ------------------------------------------------------------ blocks

    def ev_block(self, e, env):
        if not e.items:
            return VOID
        groups, cur = [], [e.items[0]]
        for sep, item in zip(e.separators, e.items[1:]):
            if sep == ",":
                cur.append(item)
            else:
                groups.append(cur)
                cur = [item]
        groups.append(cur)
        v = VOID
        sched = self.sched
        for g in groups:
            if len(g) == 1 or sched.current is None:
                for x in g:
                    v = self.ev(x, env)
                continue
            parent = sched.current
            kids = [sched.spawn(partial(self.ev, x, env), parent=parent) for x in g]
            for k in kids:
                sched.wait_for(k)
            parent.observe(("join", tuple((k.id, k.outcome[0], vkey(k.outcome[1])) for k in kids)))
            errs = sorted((k for k in kids if k.outcome[0] == "err"), key=lambda k: k.done_seq)
            if errs:
                raise Thrown(errs[0].outcome[1])
            v = kids[-1].outcome[1]
        return v

    # ------------------------------------------------------------ concurrency constructs

    def ev_concurrent(self, e, env):
        return _CONCURRENT[type(e)](self, e, env)

    def _future(self, e, env):
        cur = self.sched.current
        if cur is None:
            return self.ev(e.expr, env)
        child = self.sched.spawn(partial(self.ev, e.expr, env), parent=cur)
        self.sched.event("-", "future", child.id)
        return FutureV(self, child.id, child)

    def _postpone(self, e, env):
        cur = self.sched.current
        ident = cur.fresh_name(":p") if cur is not None else f"p{len(self.proxies) + 1}"
        p = LazyProxy(self, ident, e.expr, env)
        self.proxies.append(p)
        return p

    def _pass_thru(self, e, env):
        vf = self._held_frame(env, "passThru")
        activation, actor = vf.activation, vf.activation.actor
        act = self.sched.current
        try:
            q = force(self.ev(e.queue, env))
        except Thrown as exc:
            if e.catch_handlers is None:
                raise
            v = self.run_catch(exc, e.catch_handlers, env)
            self.perform_commands(e.catch_commands, env)
            return v
        if type(q) is NullOf:
            return self.ev(e.body, env)
        if type(q) is not QueueRef or q.actor is not actor:
            raise throw("TypeMismatch", "Queue", q)
        actor.queues[q.name].append(act)
        self.sched.event(actor.id, "enqueue", q.name)
        self._release(actor, activation)
        self.sched.block()
        activation.refresh()
        return self.ev(e.body, env)

    def _hole(self, e, env):
        vf = self._held_frame(env, "hole")
        activation, actor = vf.activation, vf.activation.actor
        act = self.sched.current
        self._release(actor, activation)
        err = None
        v = VOID
        try:
            v = self.ev(e.expr, env)
        except Thrown as exc:
            err = exc
        self._reacquire(actor, act)
        activation.refresh()
        self.check_invariant(actor, "hole")
        self.perform_commands(e.commands, env)
        if err is not None:
            raise err
        return v

    def _prep(self, e, env):
        vf = self._held_frame(env, "prep")
        self._prep_commands(e.commands, env, vf)
        return self.ev(e.tail, env)

    def _relay(self, e, env, stay: bool = False):
        vf = self._held_frame(env, "stay" if stay else "relay")
        activation, actor = vf.activation, vf.activation.actor
        start = 0 if stay else vf.layer + 1
        if e.args is None:
            args, kwargs = None, {}
        else:
            args, kwargs = self.eval_args(e.args, env)
        catches = [h for h in e.handlers if h.kind in _CATCH_KINDS]
        cases = [h for h in e.handlers if h.kind not in _CATCH_KINDS]
        try:
            v = self._dispatch_nested(actor, start, e.selector, args, kwargs)
        except Thrown as exc:
            activation.refresh()
            if not catches:
                raise
            return self.run_catch(exc, catches, env)
        activation.refresh()
        if not cases:
            return v
        return self.run_handlers(v, cases, env)

    def _stay(self, e, env):
        return self._relay(e, env, stay=True)

    # ------------------------------------------------------------ theories

    def lookup_theory(self, name):
        th = self.theories.get(name)
        return TheoryV(th) if th is not None else None

    def new_theory(self, name: str) -> Theory:
        th = Theory(name)
        self.theories[name] = th
        return th

    def _theory(self, x, env) -> Theory:
        if type(x) is A.Identifier:
            v = env_find(env, x.name, _MISSING)
            if v is _MISSING:
                return self.theories.get(x.name) or self.new_theory(x.name)
        else:
            v = self.ev(x, env)
        v = force(v)
        if type(v) is not TheoryV:
            raise throw("TypeMismatch", "theory", v)
        return v.theory

    def logic_pattern(self, p, env):
        """Turn a pattern into a logic term with ``Var`` placeholders."""
        t = type(p)
        if t is A.PBind:
            return Var(p.name)
        if t in (A.PWild, A.PTypedWild):
            return Var("_")
        if t is A.PKeyword:
            return Atom(p.name, tuple(self.logic_pattern(x, env) for _, x in p.args))
        if t is A.PProp:
            return Atom(p.functor, tuple(self.logic_pattern(x, env) for x in p.args))
        if t is A.PName:
            v = env_find(env, p.name, _MISSING)
            return Atom(p.name, ()) if v is _MISSING else force(v)
        if t is A.PLit:
            return p.value
        if t in (A.PEq, A.PValue):
            return deep_resolve(self.ev(p.expr, env))
        raise throw("Unsupported", "logic pattern")

    def _rule_body(self, body, env):
        def run(bindings):
            env2 = env
            for k, v in bindings.items():
                env2 = env_bind(env2, k, v)
            self._logic_depth += 1
            try:
                self.ev(body, env2)
            finally:
                self._logic_depth -= 1

        return run

    def _logic_yield(self):
        if self._logic_depth == 0:
            self.sched.yield_()

    def _assert(self, e, env):
        th = self._theory(e.theory, env)
        prop = deep_resolve(self.ev(e.proposition, env))
        self._logic_yield()
        self.sched.event("-", "assert", f"{th.name} {show(prop)}")
        th.assert_(prop)
        return VOID

    def _when_assert(self, e, env):
        th = self._theory(e.theory, env)
        pat = self.logic_pattern(e.pattern, env)
        self._logic_yield()
        th.add_forward_rule(pat, self._rule_body(e.body, env))
        return VOID

    def _goal(self, e, env):
        th = self._theory(e.theory, env)
        pat = self.logic_pattern(e.pattern, env)
        self._logic_yield()
        if e.body is None:
            return ListV(th.set_goal(pat))
        th.set_goal(pat, self._rule_body(e.body, env))
        return VOID

    def _when_goal(self, e, env):
        th = self._theory(e.theory, env)
        pat = self.logic_pattern(e.pattern, env)
        self._logic_yield()
        th.add_goal_rule(pat, self._rule_body(e.body, env))
        return VOID

    # ------------------------------------------------------------ exploration support

    def all_theories(self):
        seen = []
        for th in self.theories.values():
            seen.extend(th.lineage())
        return seen

    def fingerprint(self) -> int:
        """Hash of everything that can influence the rest of the run."""
        globals_key = tuple(sorted((k, vkey(v)) for k, v in self.globals.bindings.items()))
        return hash((
            self.item_index,
            globals_key,
            self.sched.state_key(),
            tuple(a.state_key() for a in self.actors),
            tuple(p.vkey() for p in self.proxies),
            tuple((t.name, tuple(t.facts), len(t.fired), len(t.goals), len(t.forward_rules), len(t.goal_rules))
                  for t in self.all_theories()),
        ))


_CONCURRENT = {
    A.Future: Machine._future,
    A.Postpone: Machine._postpone,
    A.PassThru: Machine._pass_thru,
    A.Hole: Machine._hole,
    A.Prep: Machine._prep,
    A.Relay: Machine._relay,
    A.Stay: Machine._stay,
    A.LogicAssert: Machine._assert,
    A.LogicWhenAssert: Machine._when_assert,
    A.LogicGoal: Machine._goal,
    A.LogicWhenGoal: Machine._when_goal,
}


def deep_resolve(v):
    """Force futures and proxies everywhere inside a value (lazy lists are forced too)."""
    v = force(v)
    t = type(v)
    if t is ListV:
        return ListV([deep_resolve(x) for x in list_items(v)])
    if t is StructV:
        out = StructV(v.template, tuple((k, deep_resolve(x)) for k, x in v.fields), v.behavior, v.keyword)
        return out
    if t is Atom:
        return Atom(v.name, tuple(deep_resolve(x) for x in v.args))
    if t is InterfaceView:
        return InterfaceView(deep_resolve(v.target), v.interface)
    return v


def run_with_big_stack(fn, *args, stack_mb: int = 2048, recursion: int = 600_000):
    """Run ``fn`` in a thread with a large C stack so deep recursion does not crash."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args)
        except BaseException as ex:  # re-raised in the caller's thread
            box["error"] = ex

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, recursion))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box.get("value")
