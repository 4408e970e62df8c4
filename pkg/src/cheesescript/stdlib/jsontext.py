"""JSON text conversion for ``JsonV`` trees, built on the standard ``json`` module."""

from __future__ import annotations

import json

from ..kernel.env import throw
from ..kernel.values import JsonObject


def _reject_duplicates(pairs):
    seen = set()
    for k, _ in pairs:
        if k in seen:
            raise throw("DuplicateKey", k)
        seen.add(k)
    return JsonObject(pairs)


def parse_json(text: str):
    """Parse JSON text into a tree; object key order is preserved."""
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as ex:
        raise throw("ParseError", f"{ex.msg} at offset {ex.pos}") from None


def _plain(tree):
    if isinstance(tree, JsonObject):
        return {k: _plain(x) for k, x in tree}
    if isinstance(tree, list):
        return [_plain(x) for x in tree]
    return tree


def print_json(tree) -> str:
    return json.dumps(_plain(tree), ensure_ascii=False)
