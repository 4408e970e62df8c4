"""Runtime values.

Ints, floats, bools and text are plain Python objects; everything else is a
small class below.  ``vkey`` gives every value a hashable structural key that
never forces lazy cells, so it is safe to use in scheduler fingerprints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

INT_MIN, INT_MAX = -(2**63), 2**63 - 1


class Void:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "void"


VOID = Void()


@dataclass(frozen=True)
class NullOf:
    type_name: str


@dataclass(frozen=True, eq=False)
class Atom:
    """A named constant: exceptions like ``OverdrawnException`` and logic terms like ``Human[Socrates]``."""

    name: str
    args: tuple = ()

    def __eq__(self, other):
        return isinstance(other, Atom) and vkey(self) == vkey(other)

    def __hash__(self):
        return hash(vkey(self))


class ListV:
    """An immutable list; ``tail`` is an optional lazy continuation (a postponed list)."""

    __slots__ = ("items", "tail", "_key")

    def __init__(self, items=(), tail=None):
        self.items = tuple(items)
        self.tail = tail
        self._key = None

    def __repr__(self) -> str:
        return f"ListV({list(self.items)!r}{', lazy' if self.tail is not None else ''})"


class MultisetV:
    __slots__ = ("items", "_key")

    def __init__(self, items=()):
        self.items = tuple(sorted(items, key=sort_key))
        self._key = None


class SetV:
    __slots__ = ("items", "_key")

    def __init__(self, items=()):
        seen = {}
        for x in items:
            seen.setdefault(vkey(x), x)
        self.items = tuple(sorted(seen.values(), key=sort_key))
        self._key = None


class MapV:
    """Deterministic map; ``pairs`` is kept sorted in canonical key order."""

    __slots__ = ("pairs", "index", "_key")

    def __init__(self, pairs=()):
        self.pairs = tuple(sorted(pairs, key=lambda kv: sort_key(kv[0])))
        self.index = {vkey(k): v for k, v in self.pairs}
        self._key = None


class MultimapV:
    """Nondeterministic map: every key maps to a multiset of values."""

    __slots__ = ("pairs", "index", "_key")

    def __init__(self, pairs=()):
        self.pairs = tuple(sorted(pairs, key=lambda kv: sort_key(kv[0])))
        self.index = {vkey(k): v for k, v in self.pairs}
        self._key = None


_ids = itertools.count()


class EnumType:
    def __init__(self, members, uid=None):
        self.name = None
        self.members = tuple(members)
        self.uid = next(_ids) if uid is None else uid
        self.values = tuple(EnumV(self, i) for i in range(len(self.members)))

    def member(self, name: str) -> "EnumV":
        return self.values[self.members.index(name)]


@dataclass(frozen=True, eq=False)
class EnumV:
    enum: EnumType
    ordinal: int

    @property
    def name(self) -> str:
        return self.enum.members[self.ordinal]


@dataclass(eq=False)
class Closure:
    params: tuple
    body: Any
    env: Any
    name: str | None = None
    result: Any = None
    _key: Any = None


@dataclass(eq=False)
class Builtin:
    name: str
    fn: Any  # fn(interp, args: list, kwargs: dict) -> value

    def __repr__(self) -> str:
        return f"<builtin {self.name}>"


@dataclass(eq=False)
class InterfaceV:
    signatures: tuple
    extends: tuple = ()
    name: str | None = None


@dataclass(eq=False)
class ReceiverV:
    """Behavior of an immutable actor: facets of (interface, methods) evaluated in ``env``."""

    facets: tuple
    env: Any
    base: Any = None
    name: str | None = None


@dataclass(eq=False)
class StructTemplate:
    """``Name[params] :=: body``: calling it yields a StructV."""

    name: str
    params: tuple
    body: Any
    env: Any
    interfaces: tuple = ()


@dataclass(eq=False)
class StructV:
    template: StructTemplate
    fields: tuple  # of (name, value)
    behavior: Any  # ReceiverV or None
    keyword: bool = False
    _key: Any = None

    def field(self, name: str):
        for k, v in self.fields:
            if k == name:
                return v
        raise KeyError(name)


@dataclass(eq=False)
class ActorTemplate:
    decl: Any
    env: Any
    name: str | None = None


@dataclass(eq=False)
class ActorRef:
    actor: Any  # runtime Actor

    @property
    def id(self) -> str:
        return self.actor.id


@dataclass(eq=False)
class InterfaceView:
    """A value cast to one of the interfaces it implements."""

    target: Any
    interface: InterfaceV


@dataclass(eq=False)
class QueueRef:
    actor: Any
    name: str


@dataclass(frozen=True)
class TypeTag:
    """Built-in type names such as Integer and Float."""

    name: str


@dataclass(frozen=True, eq=False)
class JsonV:
    tree: Any  # None | bool | int | float | str | list | JsonObject

    def __eq__(self, other):
        return isinstance(other, JsonV) and vkey(self) == vkey(other)

    def __hash__(self):
        return hash(vkey(self))


class JsonObject(tuple):
    """Ordered JSON object: a tuple of (key, value) pairs with unique keys."""


@dataclass(eq=False)
class TheoryV:
    theory: Any


# ---------------------------------------------------------------- keys & ordering


def vkey(v) -> Any:
    """Hashable structural key; distinguishes Int from Float and Bool from Int."""
    t = type(v)
    if t is bool:
        return ("b", v)
    if t is int:
        return ("i", v)
    if t is float:
        return ("f", v)
    if t is str:
        return ("s", v)
    if v is VOID:
        return ("v",)
    if t is NullOf:
        return ("n", v.type_name)
    if t in (MultisetV, SetV, MapV, MultimapV, StructV):
        if v._key is None:
            v._key = _compound_key(v)
        return v._key
    if t is ListV:
        if v.tail is not None:
            return _compound_key(v)  # the lazy tail may change state
        if v._key is None:
            v._key = _compound_key(v)
        return v._key
    if t is Closure:
        return _compound_key(v)
    if t is Atom:
        return ("a", v.name, tuple(vkey(x) for x in v.args))
    if t is EnumV:
        return ("e", v.enum.uid, v.ordinal)
    if t is TypeTag:
        return ("T", v.name)
    if t is JsonV:
        return ("J", _json_key(v.tree))
    if t is ActorRef:
        return ("A", v.actor.id)
    if t is QueueRef:
        return ("Q", v.actor.id, v.name)
    if t is InterfaceView:
        return ("I", vkey(v.target), id(v.interface.signatures))
    # Runtime objects are keyed by the syntax that created them, so that
    # separate runs of the same program produce comparable keys.
    if t is ActorTemplate:
        return ("AT", id(v.decl), v.name)
    if t is StructTemplate:
        return ("ST", id(v.body), v.name)
    if t is InterfaceV:
        return ("IF", id(v.signatures), v.name)
    if t is EnumType:
        return ("ET", v.uid)
    if t is Builtin:
        return ("B", v.name)
    if t is TheoryV:
        return ("TH", v.theory.name)
    key = getattr(v, "vkey", None)
    if key is not None:
        return key()
    return ("o", type(v).__name__, id(v))


def _compound_key(v) -> Any:
    t = type(v)
    if t is ListV:
        tail = None if v.tail is None else vkey(v.tail)
        return ("L", tuple(vkey(x) for x in v.items), tail)
    if t is MultisetV:
        return ("M", tuple(vkey(x) for x in v.items))
    if t is SetV:
        return ("S", tuple(vkey(x) for x in v.items))
    if t is MapV:
        return ("m", tuple((vkey(k), vkey(x)) for k, x in v.pairs))
    if t is MultimapV:
        return ("mm", tuple((vkey(k), vkey(x)) for k, x in v.pairs))
    if t is StructV:
        return ("st", id(v.template.body), tuple((k, vkey(x)) for k, x in v.fields))
    if t is Closure:
        from .env import env_key

        return ("c", id(v.body), env_key(v.env))
    raise TypeError(t)


def _json_key(tree) -> Any:
    if isinstance(tree, JsonObject):
        return ("o", tuple((k, _json_key(x)) for k, x in tree))
    if isinstance(tree, list):
        return ("l", tuple(_json_key(x) for x in tree))
    return vkey(VOID if tree is None else tree)


def sort_key(v) -> tuple:
    """Canonical print order: numbers, then strings, then booleans, then the rest."""
    t = type(v)
    if t in (int, float):
        return (0, v, 0 if t is int else 1, "")
    if t is str:
        return (1, 0, 0, v)
    if t is bool:
        return (2, int(v), 0, "")
    return (3, 0, 0, show(v) + "\x00" + repr(vkey(v)))


# ---------------------------------------------------------------- printing


def show(v) -> str:
    """Render a value in re-parseable ASCII surface syntax."""
    t = type(v)
    if t is bool:
        return "true" if v else "false"
    if t in (int, float):
        return repr(v)
    if t is str:
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
    if v is VOID:
        return "void"
    if t is NullOf:
        return f"null {v.type_name}"
    if t is ListV:
        from .lazy import list_items

        return "[" + ", ".join(show(x) for x in list_items(v)) + "]"
    if t is MultisetV:
        return "[| " + ", ".join(show(x) for x in v.items) + " |]" if v.items else "[| |]"
    if t is SetV:
        return "{| " + ", ".join(show(x) for x in v.items) + " |}" if v.items else "{| |}"
    if t is MapV:
        return "map(" + ", ".join(f"{show(k)} -> {show(x)}" for k, x in v.pairs) + ")"
    if t is MultimapV:
        return "multimap(" + ", ".join(f"{show(k)} -> {show(x)}" for k, x in v.pairs) + ")"
    if t is EnumV:
        return f"{v.enum.name or 'enumeration'}.{v.name}"
    if t is Atom:
        if not v.args:
            return v.name
        return f"{v.name}[{', '.join(show(x) for x in v.args)}]"
    if t is StructV:
        if v.keyword:
            inner = ", ".join(f"{k}: {show(x)}" for k, x in v.fields)
        else:
            inner = ", ".join(show(x) for _, x in v.fields)
        return f"{v.template.name}[{inner}]"
    if t is JsonV:
        return show_json(v.tree, prefix=True)
    if t is TypeTag:
        return v.name
    if t is Closure:
        return f"<procedure {v.name}>" if v.name else "<procedure>"
    if t is Builtin:
        return f"<procedure {v.name}>"
    if t is InterfaceV:
        return f"<interface {v.name}>" if v.name else "<interface>"
    if t is ActorRef:
        return f"<actor {v.actor.id}>"
    if t is QueueRef:
        return f"<queue {v.name}>"
    if t is InterfaceView:
        return show(v.target)
    if t is EnumType:
        return f"<enumeration {v.name}>" if v.name else "<enumeration>"
    if t in (StructTemplate, ActorTemplate):
        return f"<constructor {v.name}>"
    if t is ReceiverV:
        return f"<actor {v.name}>" if v.name else "<actor>"
    if t is TheoryV:
        return f"<theory {v.theory.name}>"
    custom = getattr(v, "show", None)
    if custom is not None:
        return custom()
    return f"<{type(v).__name__}>"


def show_json(tree, prefix: bool = False) -> str:
    head = "JSON " if prefix else ""
    if isinstance(tree, JsonObject):
        return head + "{" + ", ".join(f"{show(k)}: {show_json(x)}" for k, x in tree) + "}"
    if isinstance(tree, list):
        return head + "[" + ", ".join(show_json(x) for x in tree) + "]"
    if tree is None:
        return head + "(null)" if prefix else "null"
    inner = show(tree)
    return f"JSON ({inner})" if prefix else inner


def is_number(v) -> bool:
    t = type(v)
    return t is int or t is float


# Names of the built-in type tags.
BUILTIN_TYPES = (
    "Integer", "Float", "Number", "Boolean", "String", "Text", "Void", "Queue",
    "Degrees", "Length", "Currency", "NonNegativeInteger", "List", "Multiset",
    "Set", "Map", "Multimap", "JSON", "Procedure", "Actor", "Environment",
)


@dataclass(eq=False)
class Cell:
    """Mutable box used where the runtime needs a shared, updatable slot."""

    value: Any = None
    extra: dict = field(default_factory=dict)
