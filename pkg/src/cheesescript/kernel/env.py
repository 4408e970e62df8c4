"""Immutable environments: a chain of frames ending in ``EMPTY`` (None).

Three frame kinds share the chain:

* ``Frame`` holds one binding; ``env_bind`` prepends one.
* ``RecFrame`` holds a group of mutually recursive definitions (``where``
  clauses and the top level).  Its dict is filled while the group is being
  elaborated and is not changed afterwards.
* ``VarFrame`` exposes the variables of an actor activation; reads go
  through the activation's snapshot so they stay stable within a message.
"""

from __future__ import annotations

from typing import Any

from .values import Atom, vkey

EMPTY = None


class Thrown(Exception):
    """A language-level exception carrying an exception value."""

    def __init__(self, value, span=None):
        self.value = value
        self.span = span  # where it was thrown, when known
        super().__init__(value)

    def __str__(self) -> str:
        from .values import show

        return show(self.value)


def throw(name: str, *args) -> Thrown:
    return Thrown(Atom(name, tuple(args)))


class Frame:
    __slots__ = ("name", "value", "rest", "_key")

    def __init__(self, name: str, value: Any, rest):
        self.name = name
        self.value = value
        self.rest = rest
        self._key = None

    def __repr__(self) -> str:
        return f"Frame({self.name}={self.value!r})"


class RecFrame:
    __slots__ = ("bindings", "rest", "site", "is_global")

    def __init__(self, rest, site=None, is_global: bool = False):
        self.bindings: dict[str, Any] = {}
        self.rest = rest
        self.site = site
        self.is_global = is_global


class VarFrame:
    """Actor variables visible to one activation (``layer`` selects the extends level)."""

    __slots__ = ("activation", "layer", "rest")

    def __init__(self, activation, layer: int, rest):
        self.activation = activation
        self.layer = layer
        self.rest = rest


_MISSING = object()


def env_lookup(env, name: str):
    """Nearest binding of ``name``; throws NotFound(name) if there is none."""
    v = env_find(env, name)
    if v is _MISSING:
        raise throw("NotFound", name)
    return v


def env_find(env, name: str, default=_MISSING):
    while env is not None:
        t = type(env)
        if t is Frame:
            if env.name == name:
                return env.value
        elif t is RecFrame:
            v = env.bindings.get(name, _MISSING)
            if v is not _MISSING:
                return v
        else:
            v = env.activation.read(name, env.layer, _MISSING)
            if v is not _MISSING:
                return v
        env = env.rest
    return default


def env_bind(env, name: str, value) -> Frame:
    return Frame(name, value, env)


def env_has(env, name: str) -> bool:
    return env_find(env, name) is not _MISSING


def find_var_frame(env) -> VarFrame | None:
    while env is not None:
        if type(env) is VarFrame:
            return env
        env = env.rest
    return None


def env_key(env) -> Any:
    """Structural key of an environment, used when fingerprinting closures."""
    parts = []
    while env is not None:
        t = type(env)
        if t is Frame:
            if env._key is not None:
                parts.append(env._key)
                break
            parts.append((env.name, vkey(env.value)))
        elif t is RecFrame:
            parts.append(("G",) if env.is_global else ("R", id(env.site), env_key(env.rest)))
            break
        else:
            parts.append(("V", env.activation.key(), env.layer))
        env = env.rest
    return tuple(parts)


def names(env) -> list[str]:
    """All bound names, nearest first (used for diagnostics and the REPL)."""
    out = []
    while env is not None:
        t = type(env)
        if t is Frame:
            out.append(env.name)
        elif t is RecFrame:
            out.extend(env.bindings)
        env = env.rest
    return out
