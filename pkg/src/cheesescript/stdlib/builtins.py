"""Built-in procedures and type names installed in every machine's global frame."""

from __future__ import annotations

import math

from ..kernel.env import throw
from ..kernel.lazy import as_list, force, list_items, list_prefix
from ..kernel.values import (
    BUILTIN_TYPES, VOID, Atom, Builtin, JsonV, ListV, MapV, MultimapV, MultisetV,
    QueueRef, SetV, TheoryV, TypeTag, show, vkey,
)
from .jsontext import parse_json, print_json

_REGISTRY: dict[str, object] = {}


def builtin(name: str):
    def register(fn):
        _REGISTRY[name] = fn
        return fn

    return register


def _arity(name: str, args, n: int):
    if len(args) != n:
        raise throw("MatchFailure", name)
    return [force(a) for a in args]


def _number(name: str, v):
    if type(v) not in (int, float):
        raise throw("TypeMismatch", "Number", v)
    return float(v)


# ---------------------------------------------------------------- collections


@builtin("empty")
def _empty(it, args, kwargs):
    (v,) = _arity("empty", args, 1)
    t = type(v)
    if t is ListV:
        head, _ = list_prefix(v, 1)
        return not head
    if t is QueueRef:
        return not v.actor.queues[v.name]
    if t in (MultisetV, SetV):
        return not v.items
    if t in (MapV, MultimapV):
        return not v.pairs
    if t is str:
        return v == ""
    raise throw("TypeMismatch", "collection", v)


@builtin("length")
def _length(it, args, kwargs):
    (v,) = _arity("length", args, 1)
    t = type(v)
    if t is ListV:
        return len(list_items(v))
    if t in (MultisetV, SetV):
        return len(v.items)
    if t in (MapV, MultimapV):
        return len(v.pairs)
    if t is str:
        return len(v)
    if t is QueueRef:
        return len(v.actor.queues[v.name])
    raise throw("TypeMismatch", "collection", v)


@builtin("first")
def _first(it, args, kwargs):
    (v,) = _arity("first", args, 1)
    head, _ = list_prefix(v, 1)
    if not head:
        raise throw("EmptyList")
    return head[0]


@builtin("rest")
def _rest(it, args, kwargs):
    (v,) = _arity("rest", args, 1)
    head, tail = list_prefix(v, 1)
    if not head:
        raise throw("EmptyList")
    return tail


@builtin("take")
def _take(it, args, kwargs):
    n, v = _arity("take", args, 2)
    if type(n) is not int or n < 0:
        raise throw("TypeMismatch", "NonNegativeInteger", n)
    items, _ = list_prefix(v, n)
    return ListV([force(x) for x in items])


@builtin("reverse")
def _reverse(it, args, kwargs):
    (v,) = _arity("reverse", args, 1)
    return ListV(list(reversed(list_items(v))))


@builtin("append")
def _append(it, args, kwargs):
    """Concatenate lists, union multisets and sets, merge maps and multimaps."""
    vals = [force(a) for a in args]
    if not vals:
        raise throw("MatchFailure", "append")
    t = type(vals[0])
    if any(type(v) is not t for v in vals):
        raise throw("TypeMismatch", show(vals[0]), vals)
    if t is ListV:
        out: list = []
        for v in vals:
            out.extend(list_items(v))
        return ListV(out)
    if t is MultisetV:
        return MultisetV([x for v in vals for x in v.items])
    if t is SetV:
        return SetV([x for v in vals for x in v.items])
    if t is MapV:
        pairs, seen = [], set()
        for v in vals:
            for k, x in v.pairs:
                if vkey(k) in seen:
                    raise throw("DuplicateKey", k)
                seen.add(vkey(k))
                pairs.append((k, x))
        return MapV(pairs)
    if t is MultimapV:
        groups: dict = {}
        for v in vals:
            for k, bag in v.pairs:
                groups.setdefault(vkey(k), (k, []))[1].extend(bag.items)
        return MultimapV((k, MultisetV(xs)) for k, xs in groups.values())
    raise throw("TypeMismatch", "collection", vals[0])


@builtin("elements")
def _elements(it, args, kwargs):
    """The members of a multiset, set or map keys, as a list in canonical order."""
    (v,) = _arity("elements", args, 1)
    if type(v) in (MultisetV, SetV):
        return ListV(list(v.items))
    if type(v) in (MapV, MultimapV):
        return ListV([k for k, _ in v.pairs])
    return as_list(v)


# ---------------------------------------------------------------- numbers


@builtin("sqrt")
def _sqrt(it, args, kwargs):
    (x,) = _arity("sqrt", args, 1)
    x = _number("sqrt", x)
    if x < 0:
        raise throw("DomainError", "sqrt", x)
    return math.sqrt(x)


@builtin("sine")
def _sine(it, args, kwargs):
    (d,) = _arity("sine", args, 1)
    return math.sin(math.radians(_number("sine", d)))


@builtin("cosine")
def _cosine(it, args, kwargs):
    (d,) = _arity("cosine", args, 1)
    return math.cos(math.radians(_number("cosine", d)))


@builtin("arcsine")
def _arcsine(it, args, kwargs):
    (x,) = _arity("arcsine", args, 1)
    x = _number("arcsine", x)
    if not -1.0 <= x <= 1.0:
        raise throw("DomainError", "arcsine", x)
    return math.degrees(math.asin(x))


@builtin("abs")
def _abs(it, args, kwargs):
    (x,) = _arity("abs", args, 1)
    if type(x) not in (int, float):
        raise throw("TypeMismatch", "Number", x)
    return abs(x)


# ---------------------------------------------------------------- JSON


@builtin("jsonParse")
def _json_parse(it, args, kwargs):
    (text,) = _arity("jsonParse", args, 1)
    if type(text) is not str:
        raise throw("TypeMismatch", "String", text)
    return JsonV(parse_json(text))


@builtin("jsonPrint")
def _json_print(it, args, kwargs):
    (v,) = _arity("jsonPrint", args, 1)
    if type(v) is not JsonV:
        raise throw("TypeMismatch", "JSON", v)
    return print_json(v.tree)


# ---------------------------------------------------------------- theories


def _theory_arg(v):
    if type(v) is not TheoryV:
        raise throw("TypeMismatch", "theory", v)
    return v.theory


@builtin("theory")
def _theory(it, args, kwargs):
    """A fresh, empty theory with the given name."""
    (name,) = _arity("theory", args, 1)
    if type(name) is not str:
        raise throw("TypeMismatch", "String", name)
    return TheoryV(it.new_theory(name))


@builtin("extension")
def _extension(it, args, kwargs):
    """A theory that sees everything asserted in its parent, but not vice versa."""
    (t,) = _arity("extension", args, 1)
    return TheoryV(_theory_arg(t).extension())


@builtin("subargument")
def _subargument(it, args, kwargs):
    """Try to derive ``phi`` from ``psi`` in an extension of ``t``; record success in ``s``."""
    s, t, psi, phi = _arity("subargument", args, 4)
    s, t = _theory_arg(s), _theory_arg(t)
    scratch = t.extension()
    scratch.assert_(psi)
    if not scratch.set_goal(phi):
        return False
    s.assert_(Atom("Entails", (psi, phi)))
    return True


# ---------------------------------------------------------------- install


def install(machine, frame) -> None:
    """Bind every built-in procedure and type name into ``frame``."""
    for name in BUILTIN_TYPES:
        frame.bindings[name] = TypeTag(name)
    for name, fn in _REGISTRY.items():
        frame.bindings[name] = Builtin(name, fn)
    frame.bindings["void"] = VOID
