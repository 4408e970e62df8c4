"""Deferred values (futures and postponed proxies) and lazy list access.

A ``Deferred`` is anything with a ``force()`` method that returns the final
value or raises ``Thrown``.  The runtime supplies the concrete classes; the
kernel only needs to know how to get through them.
"""

from __future__ import annotations

from .env import throw
from .values import ListV


class Deferred:
    """Base class for values whose content may not be known yet."""

    def force(self):  # pragma: no cover - abstract
        raise NotImplementedError


def force(v):
    """Resolve futures and proxies until a plain value remains."""
    while isinstance(v, Deferred):
        v = v.force()
    return v


def as_list(v) -> ListV:
    v = force(v)
    if type(v) is not ListV:
        raise throw("TypeMismatch", "list", v)
    return v


def list_items(v) -> list:
    """All elements of a list, forcing any lazy tail."""
    v = as_list(v)
    items = list(v.items)
    tail = v.tail
    while tail is not None:
        t = as_list(tail)
        items.extend(t.items)
        tail = t.tail
    return items


def list_prefix(v, k: int):
    """First ``k`` elements (fewer if the list is shorter) and the remaining list.

    Only as much of a lazy tail is forced as is needed to produce ``k`` items.
    """
    v = as_list(v)
    items = list(v.items)
    tail = v.tail
    while len(items) < k and tail is not None:
        t = as_list(tail)
        items.extend(t.items)
        tail = t.tail
    return items[:k], ListV(items[k:], tail)


def list_length(v) -> int:
    return len(list_items(v))


def is_lazy(v) -> bool:
    return type(v) is ListV and v.tail is not None
