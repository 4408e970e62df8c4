"""Pattern matching.

``match`` returns the extended environment, or None when the pattern does
not apply.  Patterns that need to look inside a value force it; a bare
binder does not, so futures flow through unforced.
"""

from __future__ import annotations

from ..syntax import ast as A
from .env import _MISSING, Thrown, env_bind, env_find
from .lazy import force, list_items, list_prefix
from .types import check_type, implements, is_a_value, is_type_value
from .values import (
    Atom, InterfaceV, InterfaceView, ListV, NullOf, StructTemplate, StructV,
)


def match(interp, p, v, env):
    """Match ``v`` against ``p`` in ``env``; returns the extended env or None."""
    t = type(p)
    if t is A.PBind:
        if p.type is not None and not check_type(v, p.type, env):
            return None
        return env_bind(env, p.name, v)
    if t is A.PWild:
        return env
    if t is A.PLit:
        return env if interp.equal(p.value, v) else None
    if t is A.PTypedWild:
        return env if check_type(v, p.type, env) else None
    if t is A.PGuard:
        return env if _guard(interp, p, v, env) else None
    if t is A.PEq:
        return env if interp.equal(interp.ev(p.expr, env), v) else None
    if t is A.PList:
        return _match_list(interp, p.items, v, env)
    if t is A.PKeyword:
        return _match_keyword(interp, p, v, env)
    if t is A.PName:
        return _match_name(interp, p.name, v, env)
    if t is A.PValue:
        return env if interp.equal(interp.ev(p.expr, env), v) else None
    if t is A.PThatIs:
        env2 = match(interp, p.base, v, env)
        return None if env2 is None else match(interp, p.pred, v, env2)
    if t is A.PAnd:
        env2 = match(interp, p.left, v, env)
        return None if env2 is None else match(interp, p.right, v, env2)
    if t is A.POr:
        env2 = match(interp, p.left, v, env)
        return env2 if env2 is not None else match(interp, p.right, v, env)
    if t is A.PNull:
        v = force(v)
        name = p.type.name if type(p.type) is A.TName else None
        return env if type(v) is NullOf and (name is None or v.type_name == name) else None
    raise TypeError(f"unknown pattern {t.__name__}")


_CMP = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}


def _guard(interp, p, v, env) -> bool:
    bound = interp.ev(p.expr, env)
    if p.op == "=":
        return interp.equal(v, bound)
    if p.op == "!=":
        return not interp.equal(v, bound)
    v, bound = force(v), force(bound)
    try:
        return interp.compare(p.op, v, bound)
    except Thrown:
        return False


def _match_list(interp, items, v, env):
    v = force(v)
    if type(v) is not ListV:
        return None
    n_single = sum(1 for _, s in items if not s)
    spreads = [i for i, (_, s) in enumerate(items) if s]
    if not spreads:
        vals, rest = list_prefix(v, len(items) + 1)
        if len(vals) != len(items):
            return None
        for (pat, _), x in zip(items, vals):
            env = match(interp, pat, x, env)
            if env is None:
                return None
        return env
    if spreads == [len(items) - 1]:
        # leading singles then one trailing spread: keep the tail lazy
        vals, rest = list_prefix(v, n_single)
        if len(vals) < n_single:
            return None
        for (pat, _), x in zip(items, vals):
            env = match(interp, pat, x, env)
            if env is None:
                return None
        return match(interp, items[-1][0], rest, env)
    vals = list_items(v)
    return _match_seq(interp, items, 0, vals, 0, env)


def _match_seq(interp, items, i, vals, pos, env):
    if i == len(items):
        return env if pos == len(vals) else None
    pat, spread = items[i]
    if not spread:
        if pos >= len(vals):
            return None
        env2 = match(interp, pat, vals[pos], env)
        return None if env2 is None else _match_seq(interp, items, i + 1, vals, pos + 1, env2)
    singles_after = sum(1 for _, s in items[i + 1:] if not s)
    if i == len(items) - 1:
        choices = [len(vals)]
    else:
        choices = range(pos, len(vals) - singles_after + 1)
    for k in choices:
        env2 = match(interp, pat, ListV(vals[pos:k]), env)
        if env2 is None:
            continue
        env3 = _match_seq(interp, items, i + 1, vals, k, env2)
        if env3 is not None:
            return env3
    return None


def _match_name(interp, name, v, env):
    bound = env_find(env, name, _MISSING)
    if bound is _MISSING:
        v = force(v)
        return env if type(v) is Atom and v.name == name else None
    if is_type_value(bound):
        return env if is_a_value(v, bound) else None
    return env if interp.equal(bound, v) else None


def _match_keyword(interp, p, v, env):
    head = env_find(env, p.name, _MISSING)
    v = force(v)
    if type(head) is StructTemplate:
        target = v.target if type(v) is InterfaceView else v
        if type(target) is not StructV or target.template is not head:
            return None
        fields = target.fields
        if len(p.args) != len(fields):
            return None
        for k, (kw, pat) in enumerate(p.args):
            if kw is None:
                x = fields[k][1]
            else:
                try:
                    x = target.field(kw)
                except KeyError:
                    return None
            env = match(interp, pat, x, env)
            if env is None:
                return None
        return env
    if type(head) is InterfaceV:
        if not implements(v, head):
            return None
        for kw, pat in p.args:
            if kw is None:
                return None
            env = match(interp, pat, interp.send(v, kw, None, {}), env)
            if env is None:
                return None
        return env
    if head is _MISSING:
        if type(v) is not Atom or v.name != p.name or len(v.args) != len(p.args):
            return None
        for (_, pat), x in zip(p.args, v.args):
            env = match(interp, pat, x, env)
            if env is None:
                return None
        return env
    return None
