"""Tree-walking evaluator.

``Interpreter.ev`` evaluates an AST node in an environment and either returns
a value or raises ``Thrown``.  Everything that involves activities (blocks,
futures, actors, holes, theories) goes through hook methods that the runtime
overrides; the plain kernel evaluates blocks sequentially and rejects the
rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..syntax import ast as A
from .env import _MISSING, RecFrame, Thrown, env_bind, env_find, throw
from .lazy import Deferred, force, list_items
from .patterns import match
from .types import ALIASES, _check_tag, check_type, extends_interface, implements, is_a_value
from .values import (
    INT_MAX, INT_MIN, VOID, ActorRef, ActorTemplate, Atom, Builtin, Closure,
    EnumType, EnumV, InterfaceV, InterfaceView, JsonObject, JsonV, ListV, MapV,
    MultimapV, MultisetV, NullOf, ReceiverV, SetV, StructTemplate, StructV,
    TypeTag, show, vkey,
)


class StepLimitExceeded(Exception):
    """The run used more scheduler steps (or evaluation fuel) than allowed."""


class Deadlock(StepLimitExceeded):
    """No activity can make progress but the program has not finished."""


@dataclass
class ReturnedC:
    value: Any


@dataclass
class ThrewC:
    exception: Any


@dataclass
class _TailCall:
    args: list


def _capitalized(name: str) -> bool:
    return name[:1].isupper()


class Interpreter:
    """Evaluator state: the global frame and an evaluation-fuel counter."""

    def __init__(self, fuel_limit: int = 10**8):
        self.globals = RecFrame(None, is_global=True)
        self.fuel = 0
        self.fuel_limit = fuel_limit

    # ------------------------------------------------------------ entry points

    def eval(self, e, env=None):
        """Evaluate to a Completion instead of raising."""
        try:
            return ReturnedC(self.ev(e, self.globals if env is None else env))
        except Thrown as t:
            return ThrewC(t.value)

    def ev(self, e, env):
        return _DISPATCH[type(e)](self, e, env)

    def tick(self):
        self.fuel += 1
        if self.fuel > self.fuel_limit:
            raise StepLimitExceeded(f"evaluation fuel exhausted after {self.fuel_limit} steps")

    # ------------------------------------------------------------ hooks

    def actor_send(self, ref, selector, args, kwargs):
        raise throw("NotApplicable", selector)

    def actor_responds(self, ref, selector) -> bool:
        return False

    def spawn(self, template, args, kwargs):
        raise throw("Unsupported", "actor")

    def ev_block(self, e, env):
        v = VOID
        for item in e.items:
            v = self.ev(item, env)
        return v

    def perform_commands(self, commands, env):
        raise throw("NotInActor", "also")

    def ev_concurrent(self, e, env):
        raise throw("Unsupported", type(e).__name__)

    def lookup_theory(self, name):
        return None

    # ------------------------------------------------------------ values & equality

    def equal(self, a, b) -> bool:
        """Structural equality; Int and Float are never equal, actors compare by identity."""
        a, b = force(a), force(b)
        if type(a) is InterfaceView:
            a = a.target
        if type(b) is InterfaceView:
            b = b.target
        ta, tb = type(a), type(b)
        if ta is not tb:
            return False
        if ta is ListV:
            xs, ys = list_items(a), list_items(b)
            return len(xs) == len(ys) and all(self.equal(x, y) for x, y in zip(xs, ys))
        if ta is StructV:
            return a.template is b.template and len(a.fields) == len(b.fields) and all(
                ka == kb and self.equal(x, y) for (ka, x), (kb, y) in zip(a.fields, b.fields)
            )
        if ta is Atom:
            return a.name == b.name and len(a.args) == len(b.args) and all(
                self.equal(x, y) for x, y in zip(a.args, b.args)
            )
        if ta is ActorRef:
            return a.actor is b.actor
        if ta is float:
            return a == b
        return vkey(a) == vkey(b)

    def compare(self, op, a, b) -> bool:
        a, b = force(a), force(b)
        ok = (type(a) in (int, float) and type(b) in (int, float)) or (type(a) is str and type(b) is str)
        if not ok:
            raise throw("TypeMismatch", "comparable", a)
        if op == "<":
            return a < b
        if op == ">":
            return a > b
        if op == "<=":
            return a <= b
        return a >= b

    def truth(self, v) -> bool:
        v = force(v)
        if type(v) is not bool:
            raise throw("TypeMismatch", "Boolean", v)
        return v

    # ------------------------------------------------------------ calls

    def eval_args(self, arg_nodes, env):
        args, kwargs = [], {}
        for a in arg_nodes:
            if a.kind == "pos":
                args.append(self.ev(a.expr, env))
            elif a.kind == "kw":
                kwargs[a.name] = self.ev(a.expr, env)
            else:
                args.extend(list_items(self.ev(a.expr, env)))
        return args, kwargs

    def bind_params(self, params, args, kwargs, env):
        """Bind call arguments to a parameter list.

        Returns (env, bound) where bound is a list of (param, value), or
        (None, reason) with reason 'type' or 'match'.
        """
        pos = list(args)
        rest_param = None
        fixed = []
        for p in params:
            if p.rest:
                rest_param = p
            else:
                fixed.append(p)
        bound = []
        if not kwargs:
            if len(pos) < len(fixed) or (rest_param is None and len(pos) > len(fixed)):
                return None, "match"
            for p, v in zip(fixed, pos):
                bound.append((p, v))
            extra = pos[len(fixed):]
        else:
            kw = dict(kwargs)
            for p in fixed:
                if p.keyword is not None:
                    if p.keyword not in kw:
                        return None, "match"
                    bound.append((p, kw.pop(p.keyword)))
                else:
                    if not pos:
                        return None, "match"
                    bound.append((p, pos.pop(0)))
            if kw or (pos and rest_param is None):
                return None, "match"
            extra = pos
        if rest_param is not None:
            bound.append((rest_param, ListV(extra)))
        for p, v in bound:
            env2 = match(self, p.pattern, v, env)
            if env2 is None:
                typed = type(p.pattern) is A.PBind and p.pattern.type is not None
                return None, "type" if typed else "match"
            env = env2
        return env, bound

    def call(self, f, args, kwargs=None, name: str | None = None):
        kwargs = kwargs or {}
        f = force(f)
        t = type(f)
        if t is Closure:
            return self.apply_closure(f, args, kwargs)
        if t is Builtin:
            return f.fn(self, args, kwargs)
        if t is MapV or t is MultimapV:
            if len(args) != 1 or kwargs:
                raise throw("MatchFailure", "map application takes one key")
            key = force(args[0])
            v = f.index.get(vkey(key), _MISSING)
            if v is _MISSING:
                if t is MultimapV:
                    return MultisetV()
                raise throw("KeyNotFound", key)
            return v
        if t is StructTemplate:
            return self.construct(f, args, kwargs)
        if t is ActorTemplate:
            return self.spawn(f, args, kwargs)
        raise throw("NotApplicable", name or show(f))

    def apply_closure(self, f: Closure, args, kwargs):
        self.tick()
        env, bound = self.bind_params(f.params, args, kwargs, f.env)
        if env is None:
            raise throw("TypeMismatch" if bound == "type" else "MatchFailure", f.name or "procedure")
        v = self.ev(f.body, env)
        if f.result is not None and not check_type(v, f.result, f.env):
            raise throw("TypeMismatch", f.name or "result", v)
        return v

    def construct(self, tmpl: StructTemplate, args, kwargs):
        env, bound = self.bind_params(tmpl.params, args, kwargs, tmpl.env)
        if env is None:
            raise throw("TypeMismatch" if bound == "type" else "MatchFailure", tmpl.name)
        body = tmpl.body
        if type(body) is not A.Receiver:
            return self.ev(body, env)
        fields = []
        for i, (p, v) in enumerate(bound):
            if p.keyword is not None:
                fname = p.keyword
            elif type(p.pattern) is A.PBind:
                fname = p.pattern.name
            else:
                fname = f"_{i}"
            fields.append((fname, v))
        keyword = any(p.keyword is not None for p, _ in bound)
        sv = StructV(tmpl, tuple(fields), None, keyword)
        sv.behavior = self.make_receiver(body, env, sv)
        return sv

    def make_receiver(self, node: A.Receiver, env, self_value=None) -> ReceiverV:
        facets = []
        for iface_expr, methods in node.facets:
            iface = None
            if iface_expr is not None:
                iface = force(self.ev(iface_expr, env))
                if type(iface) is not InterfaceV:
                    raise throw("TypeMismatch", "interface", iface)
            facets.append((iface, tuple(methods or ())))
        base = None if node.extends is None else self.ev(node.extends, env)
        rv = ReceiverV(tuple(facets), None, base)
        rv.env = env_bind(env, "%self", rv if self_value is None else self_value)
        return rv

    # ------------------------------------------------------------ message sending

    def send(self, target, selector, args, kwargs=None):
        """Deliver a message; ``args`` is None for a bare message such as ``c.getBalance``."""
        kwargs = kwargs or {}
        target = force(target)
        t = type(target)
        if t is ActorRef:
            return self.actor_send(target, selector, args, kwargs)
        if t is StructV or t is ReceiverV:
            return self.dispatch_object(target, None, selector, args, kwargs)
        if t is InterfaceView:
            inner = target.target
            if type(inner) is ActorRef:
                return self.actor_send(inner, selector, args, kwargs)
            return self.dispatch_object(inner, target.interface, selector, args, kwargs)
        if t is EnumType and not args:
            if selector in target.members:
                return target.member(selector)
        raise throw("NotApplicable", selector)

    def _facets(self, obj, iface):
        rv = obj.behavior if type(obj) is StructV else obj
        while rv is not None:
            for fi, methods in rv.facets:
                if iface is None or fi is None or extends_interface(fi, iface):
                    yield rv, methods
            rv = rv.base if type(rv.base) is ReceiverV else (
                rv.base.behavior if type(rv.base) is StructV else None
            )

    def dispatch_object(self, obj, iface, selector, args, kwargs):
        for rv, methods in self._facets(obj, iface):
            for m in methods:
                if m.selector != selector and m.selector != "?":
                    continue
                env = self.bind_method(m, args, kwargs, rv.env)
                if env is not None:
                    self.tick()
                    return self.ev(m.body, env)
        if type(obj) is StructV and not args and not kwargs:
            for k, v in obj.fields:
                if k == selector:
                    return v
        raise throw("NotApplicable", selector)

    def bind_method(self, m, args, kwargs, env):
        if m.params is None:
            return env if not args and not kwargs else None
        env2, _ = self.bind_params(m.params, args or [], kwargs, env)
        return env2

    def responds_to(self, target, selector) -> bool:
        target = force(target)
        t = type(target)
        if t is ActorRef:
            return self.actor_responds(target, selector)
        if t in (StructV, ReceiverV):
            for _, methods in self._facets(target, None):
                if any(m.selector == selector for m in methods):
                    return True
            return t is StructV and any(k == selector for k, _ in target.fields)
        return False

    # ------------------------------------------------------------ arithmetic

    def arith(self, op, a, b):
        a, b = force(a), force(b)
        ta, tb = type(a), type(b)
        if op == "##":
            if ta is not ListV or tb is not ListV:
                raise throw("TypeMismatch", "list", a if ta is not ListV else b)
            return ListV(list_items(a) + list(b.items), b.tail)
        if ta in (int, float) and tb in (int, float):
            if op == "/":
                if b == 0:
                    raise throw("DivisionByZero")
                return a / b
            if op == "mod":
                if b == 0:
                    raise throw("DivisionByZero")
                return a % b
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            else:
                r = a * b
            if type(r) is int and not INT_MIN <= r <= INT_MAX:
                raise throw("ArithmeticOverflow", op)
            return r
        if op == "+" and ta is str and tb is str:
            return a + b
        if ta in (StructV, ReceiverV, ActorRef, InterfaceView):
            return self.send(a, op, [b])
        raise throw("TypeMismatch", "Number", a if ta not in (int, float) else b)

    # ------------------------------------------------------------ definitions

    def define(self, d: A.Define, frame: RecFrame):
        target = d.target
        name = target.name
        if target.bracket:
            value = StructTemplate(name, target.params or (), d.expr, frame)
        elif target.params is not None:
            value = Closure(target.params, d.expr, frame, name, target.result)
        else:
            value = self.ev(d.expr, frame)
            if target.result is not None and not check_type(value, target.result, frame):
                raise throw("TypeMismatch", name, value)
            if type(value) in (InterfaceV, ActorTemplate, EnumType, ReceiverV, Closure) and value.name is None:
                value.name = name
        frame.bindings[name] = value
        return value

    # ------------------------------------------------------------ conditionals

    def run_handlers(self, subject, handlers, env, body_eval=None, as_command=False):
        body_eval = body_eval or self.ev
        v = force(subject)
        for h in handlers:
            if h.kind == "case":
                env2 = match(self, h.pattern, v, env)
                if env2 is not None:
                    return body_eval(h.body, env2)
            elif h.kind == "else":
                if h.pattern is None:
                    return body_eval(h.body, env)
                env2 = match(self, h.pattern, v, env)
                if env2 is not None:
                    return body_eval(h.body, env2)
        if as_command:
            return VOID
        raise throw("NoApplicableHandler", v)

    def run_catch(self, exc: Thrown, handlers, env, body_eval=None):
        body_eval = body_eval or self.ev
        for h in handlers:
            if h.kind == "rethrow":
                raise exc
            if h.pattern is None:
                return body_eval(h.body, env)
            env2 = match(self, h.pattern, exc.value, env)
            if env2 is not None:
                return body_eval(h.body, env2)
        raise exc

    def ev_conditional(self, e, env, body_eval=None, as_command=False):
        catches = [h for h in e.handlers if h.kind in ("catch", "catch-else", "rethrow")]
        if catches:
            try:
                v = self.ev(e.subject, env)
            except Thrown as exc:
                return self.run_catch(exc, catches, env, body_eval)
        else:
            v = self.ev(e.subject, env)
        return self.run_handlers(v, e.handlers, env, body_eval, as_command)

    # ------------------------------------------------------------ casting

    def cast(self, tv, v):
        tv = force(tv)
        v = force(v)
        t = type(tv)
        if t is TypeTag:
            name = ALIASES.get(tv.name, tv.name)
            if name == "Float":
                if type(v) in (int, float):
                    return float(v)
            elif name == "Integer":
                if type(v) is int:
                    return v
                if type(v) is EnumV:
                    return v.ordinal
            elif _check_tag(v, name):
                return v
            raise throw("CastException", tv.name, v)
        if t is EnumType:
            if type(v) is int and 0 <= v < len(tv.members):
                return tv.values[v]
            if type(v) is EnumV and v.enum is tv:
                return v
            raise throw("CastException", tv.name or "enumeration", v)
        if t is InterfaceV:
            target = v.target if type(v) is InterfaceView else v
            if implements(target, tv) or implements(v, tv):
                return InterfaceView(target, tv)
            raise throw("CastException", tv.name or "interface", v)
        if t in (StructTemplate, ActorTemplate):
            if is_a_value(v, tv):
                return v
            raise throw("CastException", tv.name, v)
        raise throw("CastException", show(tv), v)

    # ------------------------------------------------------------ JSON

    def json_tree(self, node: A.JsonLiteral, env):
        if node.kind == "object":
            seen = set()
            out = []
            for k, x in node.items:
                if k in seen:
                    raise throw("DuplicateKey", k)
                seen.add(k)
                out.append((k, self.json_tree(x, env)))
            return JsonObject(out)
        if node.kind == "array":
            return [self.json_tree(x, env) for x in node.items]
        return to_json(self.ev(node.items[0], env))


def to_json(v):
    v = force(v)
    t = type(v)
    if t is JsonV:
        return v.tree
    if t in (str, int, float, bool):
        return v
    if v is VOID:
        return None
    if t is ListV:
        return [to_json(x) for x in list_items(v)]
    if t is MapV and all(type(k) is str for k, _ in v.pairs):
        return JsonObject((k, to_json(x)) for k, x in v.pairs)
    raise throw("TypeMismatch", "JSON", v)


# ---------------------------------------------------------------- node handlers


def _literal(it, e, env):
    return e.value


def _null(it, e, env):
    te = e.type
    return NullOf(te.name if type(te) is A.TName else "?")


def _unbound(it, name, env, atom_ok, args=None, kwargs=None):
    selfv = env_find(env, "%self", _MISSING)
    if selfv is not _MISSING and it.responds_to(selfv, name):
        return it.send(selfv, name, args, kwargs)
    if atom_ok:
        return Atom(name, tuple(args or ()))
    theory = it.lookup_theory(name) if args is None else None
    if theory is not None:
        return theory
    raise throw("NotFound", name)


def _identifier(it, e, env):
    v = env_find(env, e.name, _MISSING)
    if v is not _MISSING:
        return v
    return _unbound(it, e.name, env, e.atom_ok)


def _call(it, e, env):
    callee = e.callee
    if type(callee) is A.Identifier:
        f = env_find(env, callee.name, _MISSING)
        if f is _MISSING:
            args, kwargs = it.eval_args(e.args, env)
            atom_ok = e.atom_ok or callee.atom_ok
            return _unbound(it, callee.name, env, atom_ok, args, kwargs)
        args, kwargs = it.eval_args(e.args, env)
        return it.call(f, args, kwargs, callee.name)
    f = it.ev(callee, env)
    args, kwargs = it.eval_args(e.args, env)
    return it.call(f, args, kwargs)


def _dotsend(it, e, env):
    target = it.ev(e.recipient, env)
    if e.args is None:
        return it.send(target, e.name, None, {})
    args, kwargs = it.eval_args(e.args, env)
    return it.send(target, e.name, args, kwargs)


def _binop(it, e, env):
    op = e.op
    if op == "and":
        return it.truth(it.ev(e.left, env)) and it.truth(it.ev(e.right, env))
    if op == "or":
        return it.truth(it.ev(e.left, env)) or it.truth(it.ev(e.right, env))
    if op == "=>":
        return (not it.truth(it.ev(e.left, env))) or it.truth(it.ev(e.right, env))
    a = it.ev(e.left, env)
    b = it.ev(e.right, env)
    if op == "<=>":
        return it.truth(a) == it.truth(b)
    if op == "=":
        return it.equal(a, b)
    if op == "!=":
        return not it.equal(a, b)
    if op in ("<", ">", "<=", ">="):
        fa = force(a)
        if type(fa) in (StructV, ReceiverV, ActorRef, InterfaceView):
            return it.send(fa, op, [b])
        return it.compare(op, a, b)
    return it.arith(op, a, b)


def _unop(it, e, env):
    v = force(it.ev(e.operand, env))
    if e.op == "not":
        return not it.truth(v)
    if type(v) is int:
        if v == INT_MIN:
            raise throw("ArithmeticOverflow", "-")
        return -v
    if type(v) is float:
        return -v
    raise throw("TypeMismatch", "Number", v)


def _ascribe(it, e, env):
    v = it.ev(e.expr, env)
    if not check_type(v, e.type, env):
        raise throw("TypeMismatch", "ascription", v)
    return v


def _cast(it, e, env):
    return it.cast(it.ev(e.type, env), it.ev(e.expr, env))


def _conditional(it, e, env):
    return it.ev_conditional(e, env)


def _catch(it, e, env):
    try:
        return it.ev(e.body, env)
    except Thrown as exc:
        return it.run_catch(exc, e.handlers, env)


def _let(it, e, env):
    cur = group = env
    for pat, rhs, mode in e.bindings:
        if mode != "with":
            group = cur
        v = it.ev(rhs, group)
        env2 = match(it, pat, v, cur)
        if env2 is None:
            typed = type(pat) is A.PBind and pat.type is not None
            raise throw("TypeMismatch" if typed else "MatchFailure", show(force(v)))
        cur = env2
    return it.ev(e.body, cur)


def _define(it, e, env):
    frame = env if type(env) is RecFrame else it.globals
    it.define(e, frame)
    return VOID


def _where(it, e, env):
    frame = RecFrame(env, site=e)
    for d in e.defs:
        it.define(d, frame)
    return it.ev(e.body, frame)


def _lambda(it, e, env):
    return Closure(e.params, e.body, env, None, e.result)


def _receiver(it, e, env):
    return it.make_receiver(e, env)


def _interface(it, e, env):
    ext = tuple(force(it.ev(x, env)) for x in e.extends)
    return InterfaceV(e.signatures, ext)


def _actor_decl(it, e, env):
    return ActorTemplate(e, env)


def _list(it, e, env):
    items: list = []
    tail = None
    last = len(e.items) - 1
    for i, (x, spread) in enumerate(e.items):
        v = it.ev(x, env)
        if not spread:
            items.append(v)
            continue
        if i == last and isinstance(v, Deferred):
            tail = v
            continue
        v = force(v)
        if type(v) is not ListV:
            raise throw("TypeMismatch", "list", v)
        if i == last:
            items.extend(v.items)
            tail = v.tail
        else:
            items.extend(list_items(v))
    return ListV(items, tail)


def _bag_items(it, e, env) -> list:
    out = []
    for x, spread in e.items:
        v = force(it.ev(x, env))
        if not spread:
            out.append(v)
            continue
        t = type(v)
        if t is ListV:
            out.extend(force(y) for y in list_items(v))
        elif t in (MultisetV, SetV):
            out.extend(v.items)
        else:
            raise throw("TypeMismatch", "collection", v)
    return out


def _multiset(it, e, env):
    return MultisetV(_bag_items(it, e, env))


def _set(it, e, env):
    return SetV(_bag_items(it, e, env))


def _map(it, e, env):
    pairs = []
    seen = set()

    def add(k, v):
        key = vkey(k)
        if key in seen:
            raise throw("DuplicateKey", k)
        seen.add(key)
        pairs.append((k, v))

    for k, v in e.pairs:
        if v is None:
            m = force(it.ev(k, env))
            if type(m) is not MapV:
                raise throw("TypeMismatch", "map", m)
            for mk, mv in m.pairs:
                add(mk, mv)
        else:
            add(force(it.ev(k, env)), it.ev(v, env))
    return MapV(pairs)


def _multimap(it, e, env):
    groups: dict = {}

    def add(k, values):
        slot = groups.setdefault(vkey(k), (k, []))
        slot[1].extend(values)

    for k, v in e.pairs:
        if v is None:
            m = force(it.ev(k, env))
            if type(m) is MapV:
                for mk, mv in m.pairs:
                    add(mk, [mv])
            elif type(m) is MultimapV:
                for mk, mv in m.pairs:
                    add(mk, mv.items)
            else:
                raise throw("TypeMismatch", "map", m)
        else:
            key = force(it.ev(k, env))
            val = force(it.ev(v, env))
            add(key, val.items if type(val) in (SetV, MultisetV) else [val])
    return MultimapV((k, MultisetV(vs)) for k, vs in groups.values())


def _block(it, e, env):
    return it.ev_block(e, env)


def _throw(it, e, env):
    raise Thrown(force(it.ev(e.expr, env)), e.span)


def _also(it, e, env):
    try:
        v = it.ev(e.value, env)
    except Thrown:
        it.perform_commands(e.commands, env)
        raise
    it.perform_commands(e.commands, env)
    return v


def _inline(it, e, env):
    names = [n for n, _ in e.initializers]
    vals = [it.ev(x, env) for _, x in e.initializers]
    fname = e.name

    def tail_eval(x, env2):
        tx = type(x)
        if tx is A.Call and type(x.callee) is A.Identifier and x.callee.name == fname:
            args, kwargs = it.eval_args(x.args, env2)
            return _TailCall(args)
        if tx is A.Conditional:
            return it.ev_conditional(x, env2, tail_eval)
        if tx is A.Let:
            cur = group = env2
            for pat, rhs, mode in x.bindings:
                if mode != "with":
                    group = cur
                nxt = match(it, pat, it.ev(rhs, group), cur)
                if nxt is None:
                    raise throw("MatchFailure", fname)
                cur = nxt
            return tail_eval(x.body, cur)
        return it.ev(x, env2)

    while True:
        it.tick()
        env2 = env
        for n, v in zip(names, vals):
            env2 = env_bind(env2, n, v)
        r = tail_eval(e.body, env2)
        if type(r) is not _TailCall:
            return r
        if len(r.args) != len(names):
            raise throw("MatchFailure", fname)
        vals = r.args


def _enum(it, e, env):
    return EnumType(e.names, uid=("enum", id(e)))


def _json(it, e, env):
    return JsonV(it.json_tree(e, env))


def _prop(it, e, env):
    return Atom(e.functor, tuple(force(it.ev(a, env)) for a in e.args))


def _bracket(it, e, env):
    callee = e.callee
    if type(callee) is A.Identifier:
        f = env_find(env, callee.name, _MISSING)
        if f is _MISSING:
            args, kwargs = it.eval_args(e.args, env)
            if e.atom_ok or callee.atom_ok or _capitalized(callee.name):
                return Atom(callee.name, tuple(force(a) for a in args))
            raise throw("NotFound", callee.name)
    else:
        f = it.ev(callee, env)
    args, kwargs = it.eval_args(e.args, env)
    return it.call(f, args, kwargs)


def _concurrent(it, e, env):
    return it.ev_concurrent(e, env)


_DISPATCH = {
    A.Literal: _literal,
    A.NullLit: _null,
    A.Identifier: _identifier,
    A.Call: _call,
    A.BracketCall: _bracket,
    A.DotSend: _dotsend,
    A.BinOp: _binop,
    A.UnOp: _unop,
    A.Ascribe: _ascribe,
    A.Cast: _cast,
    A.Conditional: _conditional,
    A.Catch: _catch,
    A.Let: _let,
    A.Define: _define,
    A.Where: _where,
    A.Lambda: _lambda,
    A.Receiver: _receiver,
    A.InterfaceDecl: _interface,
    A.ActorDecl: _actor_decl,
    A.ListExpr: _list,
    A.MultisetExpr: _multiset,
    A.SetExpr: _set,
    A.MapExpr: _map,
    A.MultimapExpr: _multimap,
    A.Block: _block,
    A.Throw: _throw,
    A.AlsoContinuation: _also,
    A.Inline: _inline,
    A.EnumDecl: _enum,
    A.JsonLiteral: _json,
    A.PropExpr: _prop,
    A.Future: _concurrent,
    A.Postpone: _concurrent,
    A.PassThru: _concurrent,
    A.Hole: _concurrent,
    A.Prep: _concurrent,
    A.Relay: _concurrent,
    A.Stay: _concurrent,
    A.LogicAssert: _concurrent,
    A.LogicWhenAssert: _concurrent,
    A.LogicGoal: _concurrent,
    A.LogicWhenGoal: _concurrent,
}
