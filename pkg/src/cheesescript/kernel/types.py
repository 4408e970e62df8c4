"""Dynamic type checks for binder annotations, ascriptions and result types."""

from __future__ import annotations

from ..syntax import ast as A
from .env import env_find
from .lazy import Deferred, force
from .values import (
    VOID, ActorRef, ActorTemplate, Builtin, Closure, EnumType, EnumV, InterfaceV,
    InterfaceView, JsonV, ListV, MapV, MultimapV, MultisetV, NullOf, QueueRef,
    ReceiverV, SetV, StructTemplate, StructV, TypeTag,
)

_MISSING = object()

# Type names that are plain aliases of another built-in tag.
ALIASES = {"Currency": "Integer", "Text": "String", "Degrees": "Float", "Length": "Float"}


def _check_tag(v, name: str) -> bool:
    name = ALIASES.get(name, name)
    t = type(v)
    if name == "Integer":
        return t is int
    if name == "NonNegativeInteger":
        return t is int and v >= 0
    if name in ("Float", "Number"):
        return t is int or t is float
    if name == "Boolean":
        return t is bool
    if name == "String":
        return t is str
    if name == "Void":
        return v is VOID
    if name == "Queue":
        return t is QueueRef
    if name == "List":
        return t is ListV
    if name == "Multiset":
        return t is MultisetV
    if name == "Set":
        return t is SetV
    if name == "Map":
        return t is MapV
    if name == "Multimap":
        return t is MultimapV
    if name == "JSON":
        return t is JsonV
    if name == "Procedure":
        return t in (Closure, Builtin, StructTemplate, ActorTemplate)
    if name == "Actor":
        return t in (ActorRef, ReceiverV, StructV, InterfaceView)
    return True


def interfaces_of(v) -> tuple:
    """Interfaces a value declares it implements."""
    t = type(v)
    if t is InterfaceView:
        return (v.interface,)
    if t is StructV:
        return interfaces_of(v.behavior) if v.behavior is not None else ()
    if t is ReceiverV:
        out = tuple(i for i, _ in v.facets if i is not None)
        return out + (interfaces_of(v.base) if v.base is not None else ())
    if t is ActorRef:
        return tuple(v.actor.interfaces)
    return ()


def _extends_closure(iface: InterfaceV, seen=None) -> set:
    seen = seen if seen is not None else set()
    if id(iface) in seen:
        return seen
    seen.add(id(iface))
    for parent in iface.extends:
        _extends_closure(parent, seen)
    return seen


def extends_interface(child: InterfaceV, parent: InterfaceV) -> bool:
    return id(parent) in _extends_closure(child)


def implements(v, iface: InterfaceV) -> bool:
    for own in interfaces_of(v):
        if id(iface) in _extends_closure(own):
            return True
    return False


def is_a_value(v, tv) -> bool:
    """Check ``v`` against a runtime type value (tag, interface, template or enumeration)."""
    v = force(v)
    t = type(tv)
    if t is TypeTag:
        return _check_tag(v, tv.name)
    if t is InterfaceV:
        return implements(v, tv)
    if t is StructTemplate:
        if type(v) is InterfaceView:
            v = v.target
        return type(v) is StructV and v.template is tv
    if t is ActorTemplate:
        if type(v) is InterfaceView:
            v = v.target
        return type(v) is ActorRef and any(x is tv for x in v.actor.templates)
    if t is EnumType:
        return type(v) is EnumV and v.enum is tv
    return True


def is_type_value(x) -> bool:
    return type(x) in (TypeTag, InterfaceV, StructTemplate, ActorTemplate, EnumType)


def check_type(v, te, env) -> bool:
    """Does ``v`` inhabit the type expression ``te``?  Unknown type names accept anything."""
    if te is None:
        return True
    tt = type(te)
    if tt is A.TAny:
        return True
    if type(v) is NullOf or (isinstance(v, Deferred) and type(force(v)) is NullOf):
        v = force(v)
        if tt is A.TNullable:
            inner = te.inner
            return type(inner) is A.TAny or (type(inner) is A.TName and inner.name == v.type_name)
        return False
    if tt is A.TNullable:
        return check_type(v, te.inner, env)
    if tt is A.TName:
        tv = env_find(env, te.name, _MISSING)
        if tv is _MISSING:
            return True
        if not is_type_value(tv):
            return True
        return is_a_value(v, tv)
    if tt is A.TVoid:
        return force(v) is VOID
    v = force(v)
    if tt is A.TList:
        # only the already-forced prefix of a lazy list is checked
        return type(v) is ListV and _check_seq(list(v.items), te.elems, env, lazy=v.tail is not None)
    if tt is A.TMultiset:
        return type(v) is MultisetV and _check_bag(list(v.items), te.elems, env)
    if tt is A.TSet:
        return type(v) is SetV and _check_bag(list(v.items), te.elems, env)
    if tt is A.TProc:
        return type(v) in (Closure, Builtin, StructTemplate, ActorTemplate)
    if tt is A.TStar:
        return check_type(v, te.inner, env)
    return True


def _check_seq(items: list, elems: tuple, env, lazy: bool = False) -> bool:
    """Match items against element types where ``T*`` consumes any number of items."""

    def go(i: int, j: int) -> bool:
        if j == len(elems):
            return i == len(items) or lazy
        e = elems[j]
        if type(e) is A.TStar:
            k = i
            while True:
                if go(k, j + 1):
                    return True
                if k < len(items) and check_type(items[k], e.inner, env):
                    k += 1
                    continue
                return False
        if i == len(items):
            return lazy
        return check_type(items[i], e, env) and go(i + 1, j + 1)

    return go(0, 0)


def _check_bag(items: list, elems: tuple, env) -> bool:
    stars = [e for e in elems if type(e) is A.TStar]
    fixed = [e for e in elems if type(e) is not A.TStar]
    if len(fixed) > len(items) or (not stars and len(fixed) != len(items)):
        return False
    # greedy is enough for the annotations used in practice
    rest = list(items)
    for e in fixed:
        for k, x in enumerate(rest):
            if check_type(x, e, env):
                del rest[k]
                break
        else:
            return False
    return all(any(check_type(x, s.inner, env) for s in stars) for x in rest)
