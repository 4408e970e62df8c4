"""Pretty-printer emitting ASCII surface syntax that re-parses to an equal AST."""

from __future__ import annotations

from . import ast as A

# Binding strength of each construct; an operand printed where a stronger
# construct is required gets parenthesized.
WHERE, ALSO, CATCH, COND, IMP, OR, AND, NOT, CMP, MOD, ADD, MUL, UNARY, CAST, ATOM = range(15)

_BINOP_LEVEL = {
    "=>": IMP, "<=>": IMP, "or": OR, "and": AND,
    "=": CMP, "!=": CMP, "<": CMP, ">": CMP, "<=": CMP, ">=": CMP,
    "mod": MOD, "+": ADD, "-": ADD, "##": ADD, "*": MUL, "/": MUL,
}

_GREEDY = (
    A.Let, A.Lambda, A.PassThru, A.Prep, A.Hole, A.Inline, A.LogicWhenAssert,
    A.LogicWhenGoal, A.Relay, A.Stay,
)


def _level(e) -> int:
    if isinstance(e, A.Where):
        return WHERE
    if isinstance(e, A.AlsoContinuation) or isinstance(e, _GREEDY):
        return ALSO
    if isinstance(e, A.LogicGoal):
        return ALSO if e.body is not None else ATOM
    if isinstance(e, (A.Catch, A.Throw, A.Future, A.Postpone)):
        return CATCH
    if isinstance(e, A.Conditional):
        return COND
    if isinstance(e, A.BinOp):
        return _BINOP_LEVEL[e.op]
    if isinstance(e, A.UnOp):
        return NOT if e.op == "not" else UNARY
    if isinstance(e, A.Cast):
        return CAST
    if isinstance(e, A.Literal) and type(e.value) in (int, float) and e.value < 0:
        return UNARY
    if isinstance(e, (A.NullLit, A.LogicAssert, A.Receiver, A.ActorDecl, A.InterfaceDecl)):
        return UNARY
    return ATOM


def pretty(node) -> str:
    """Render an expression, definition, or program (list of items)."""
    if isinstance(node, list):
        return " ;;\n".join(pretty(n) for n in node)
    if isinstance(node, A.Define):
        return _define(node)
    if isinstance(node, A.Pattern):
        return _pat(node)
    if isinstance(node, A.TypeExpr):
        return _type(node)
    return _fmt(node, WHERE)


def _fmt(e, min_level: int) -> str:
    text = _expr(e)
    if _level(e) < min_level:
        return f"({text})"
    return text


def _literal(v) -> str:
    from ..kernel.values import Void

    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, Void):
        return "void"
    if isinstance(v, str):
        return _string(v)
    return repr(v)


def _string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'


def _args(args) -> str:
    out = []
    for a in args:
        body = _fmt(a.expr, ALSO)
        if a.kind == "spread":
            out.append("..." + body)
        elif a.kind == "kw":
            out.append(f"{a.name}: {body}")
        else:
            out.append(body)
    return ", ".join(out)


def _items(items) -> str:
    out = []
    for e, spread in items:
        if isinstance(e, A.Ascribe):
            text = f"{_fmt(e.expr, CATCH)} |-> {_type(e.type)}"
        else:
            text = _fmt(e, CATCH)
        out.append(("..." if spread else "") + text)
    return ", ".join(out)


def _handlers(hs) -> str:
    out = []
    for h in hs:
        if h.kind == "rethrow":
            out.append("catch rethrow")
            continue
        prefix = {"case": "", "else": "else ", "catch": "catch ", "catch-else": "catch else "}[h.kind]
        pat = (_pat(h.pattern) + " ") if h.pattern is not None else ""
        out.append(f"{prefix}{pat}-> {_fmt(h.body, ALSO)}")
    return "(" + ", ".join(out) + ")"


def _command(c) -> str:
    if isinstance(c, A.Assign):
        return f"{c.name} = {_fmt(c.expr, COND)}"
    if isinstance(c, A.DequeueCmd):
        return f"dequeue {_fmt(c.queue, COND)}"
    return _fmt(c.expr, COND)


def _also(cmds) -> str:
    return "".join(f" also {_command(c)}" for c in cmds)


def _methods(ms) -> str:
    out = []
    for m in ms:
        sel = m.selector
        if m.params is not None:
            sel += f"({_params(m.params)})"
        out.append(("override " if m.override else "") + f"{sel} -> {_fmt(m.body, ALSO)}")
    return "(| " + ", ".join(out) + " |)"


def _define(d: A.Define) -> str:
    return f"{_definiendum(d.target)} :=: {_fmt(d.expr, WHERE)}"


def _definiendum(t: A.Definiendum) -> str:
    s = t.name
    if t.params is not None:
        s += ("[" if t.bracket else "(") + _params(t.params) + ("]" if t.bracket else ")")
    if t.result is not None:
        s += " |->|-> " + _type(t.result)
    return s


def _params(ps) -> str:
    out = []
    for p in ps:
        s = _pat(p.pattern)
        if p.rest:
            s = "..." + s
        if p.keyword:
            s = f"{p.keyword}: {s}"
        if p.rigid:
            s += " rigid"
        out.append(s)
    return ", ".join(out)


def _json(j: A.JsonLiteral) -> str:
    if j.kind == "object":
        inner = ", ".join(f"{_string(k)}: {_json(v)}" for k, v in j.items)
        return "JSON {" + inner + "}"
    if j.kind == "array":
        return "JSON [" + ", ".join(_json(v) for v in j.items) + "]"
    return f"JSON ({_fmt(j.items[0], WHERE)})"


def _expr(e) -> str:
    if isinstance(e, A.Literal):
        return _literal(e.value)
    if isinstance(e, A.NullLit):
        return f"null {_type(e.type)}"
    if isinstance(e, A.Identifier):
        return e.name
    if isinstance(e, A.Call):
        return f"{_fmt(e.callee, ATOM)}({_args(e.args)})"
    if isinstance(e, A.BracketCall):
        return f"{_fmt(e.callee, ATOM)}[{_args(e.args)}]"
    if isinstance(e, A.DotSend):
        s = f"{_fmt(e.recipient, ATOM)}.{e.name}"
        return s if e.args is None else f"{s}({_args(e.args)})"
    if isinstance(e, A.BinOp):
        lvl = _BINOP_LEVEL[e.op]
        if lvl == CMP:
            return f"{_fmt(e.left, CMP + 1)} {e.op} {_fmt(e.right, CMP + 1)}"
        return f"{_fmt(e.left, lvl)} {e.op} {_fmt(e.right, lvl + 1)}"
    if isinstance(e, A.UnOp):
        if e.op == "not":
            return f"not {_fmt(e.operand, NOT)}"
        return f"- {_fmt(e.operand, UNARY)}"
    if isinstance(e, A.Cast):
        return f"{_fmt(e.type, ATOM)} <- {_fmt(e.expr, UNARY)}"
    if isinstance(e, A.Conditional):
        return f"{_fmt(e.subject, COND)} ?? {_handlers(e.handlers)}"
    if isinstance(e, A.Catch):
        return f"{_fmt(e.body, CATCH)} catch {_handlers(e.handlers)}"
    if isinstance(e, A.Let):
        parts = []
        for pat, rhs, mode in e.bindings:
            if mode:
                parts.append(mode)
            parts.append(f"{_pat(pat)} = {_fmt(rhs, CATCH)}")
        return "let " + " ".join(parts) + f" -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.Where):
        defs = ", ".join(_define(d) for d in e.defs)
        return f"{_fmt(e.body, ALSO)} where ({defs})"
    if isinstance(e, A.Define):
        return _define(e)
    if isinstance(e, A.Lambda):
        res = f" |-> {_type(e.result)}" if e.result is not None else ""
        return f"({_params(e.params)}){res} -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.Receiver):
        if e.extends is not None:
            return f"extends {_fmt(e.extends, ATOM)} {_methods(e.facets[0][1])}"
        iface, methods = e.facets[0]
        if iface is None:
            return _methods(methods)
        parts = []
        for iface, methods in e.facets:
            s = f"implements {_fmt(iface, ATOM)}"
            if methods is not None:
                s += " " + _methods(methods)
            parts.append(s)
        return " also ".join(parts)
    if isinstance(e, A.InterfaceDecl):
        s = "interface"
        if e.extends:
            s += " extends " + ", ".join(_fmt(x, ATOM) for x in e.extends)
        if e.signatures:
            sigs = []
            for sig in e.signatures:
                head = sig.selector
                if sig.params is not None:
                    head += f"({_params(sig.params)})"
                sigs.append(f"{head} |->|-> {_type(sig.result)}")
            s += " (" + ", ".join(sigs) + ")"
        return s
    if isinstance(e, A.ActorDecl):
        clauses = []
        for v in e.var_decls:
            t = f" |-> {_type(v.type)}" if v.type is not None else ""
            clauses.append(f"{v.name}{t} = {_fmt(v.init, COND)}")
        clauses.extend(f"queue {q}" for q in e.queue_names)
        s = f"actor({_params(e.params)})"
        if clauses:
            s += " " + ", ".join(clauses)
        if e.invariant is not None:
            s += f" invariant {_fmt(e.invariant, IMP)}"
        for i in e.implements:
            s += f" implements {_fmt(i, ATOM)}"
        if e.extends is not None:
            s += f" extends {_fmt(e.extends, ATOM)}"
        return s + " " + _methods(e.methods)
    if isinstance(e, A.ListExpr):
        return f"[{_items(e.items)}]"
    if isinstance(e, A.MultisetExpr):
        return f"[| {_items(e.items)} |]"
    if isinstance(e, A.SetExpr):
        return f"{{| {_items(e.items)} |}}"
    if isinstance(e, (A.MapExpr, A.MultimapExpr)):
        kw = "map" if isinstance(e, A.MapExpr) else "multimap"
        pairs = []
        for k, v in e.pairs:
            if v is None:
                pairs.append("..." + _fmt(k, COND))
            else:
                pairs.append(f"{_fmt(k, COND)} -> {_fmt(v, COND)}")
        return f"{kw}({', '.join(pairs)})"
    if isinstance(e, A.Block):
        out = []
        for i, item in enumerate(e.items):
            out.append(_fmt(item, WHERE))
            if i < len(e.separators):
                out.append(e.separators[i] + " ")
        return "{" + "".join(out) + "}"
    if isinstance(e, A.Throw):
        return f"throw {_fmt(e.expr, COND)}"
    if isinstance(e, A.AlsoContinuation):
        return _fmt(e.value, CATCH) + _also(e.commands)
    if isinstance(e, A.Future):
        return f"future {_fmt(e.expr, COND)}"
    if isinstance(e, A.Postpone):
        return f"postpone {_fmt(e.expr, COND)}"
    if isinstance(e, A.Inline):
        inits = ", ".join(f"{n} = {_fmt(x, ALSO)}" for n, x in e.initializers)
        return f"inline {e.name}({inits}) -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.EnumDecl):
        return f"enumerate ({', '.join(e.names)})"
    if isinstance(e, A.JsonLiteral):
        return _json(e)
    if isinstance(e, A.LogicAssert):
        return f"|- {e.theory.name} {_fmt(e.proposition, ATOM)}"
    if isinstance(e, A.LogicWhenAssert):
        return f"when |- {e.theory.name} {_pat(e.pattern)} -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.LogicGoal):
        s = f"? {e.theory.name} {_pat(e.pattern)}"
        return s if e.body is None else f"{s} -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.LogicWhenGoal):
        return f"when ? {e.theory.name} {_pat(e.pattern)} -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.PassThru):
        s = f"passThru {_fmt(e.queue, COND)}"
        if e.catch_handlers is not None:
            if len(e.catch_handlers) == 1 and e.catch_handlers[0].kind == "rethrow":
                s += " catch rethrow"
            else:
                s += " catch " + _handlers(e.catch_handlers)
            s += _also(e.catch_commands)
        return f"{s} -> {_fmt(e.body, ALSO)}"
    if isinstance(e, A.Prep):
        cmds = " also ".join(_command(c) for c in e.commands)
        return f"prep {cmds} {_expr(e.tail)}"
    if isinstance(e, A.Hole):
        return f"hole {_fmt(e.expr, CATCH)}{_also(e.commands)}"
    if isinstance(e, (A.Relay, A.Stay)):
        kw = "relay" if isinstance(e, A.Relay) else "stay"
        s = f"{kw} {e.selector}"
        if e.args is not None:
            s += f"({_args(e.args)})"
        if e.handlers:
            s += " ?? " + _handlers(e.handlers)
        return s
    raise TypeError(f"cannot print {type(e).__name__}")


def _pat(p) -> str:
    if isinstance(p, A.PWild):
        return "?"
    if isinstance(p, A.PTypedWild):
        return f"? |-> {_type(p.type)}"
    if isinstance(p, A.PBind):
        return p.name if p.type is None else f"{p.name} |-> {_type(p.type)}"
    if isinstance(p, A.PLit):
        return _literal(p.value)
    if isinstance(p, A.PNull):
        return f"null {_type(p.type)}"
    if isinstance(p, A.PEq):
        return f"={_fmt(p.expr, ATOM)}"
    if isinstance(p, A.PGuard):
        return f"({p.op} {_fmt(p.expr, MOD)})"
    if isinstance(p, A.PThatIs):
        base = _pat(p.base)
        if isinstance(p.base, A.PThatIs):
            base = f"({base})"
        return f"{base} thatIs {_pat(p.pred)}"
    if isinstance(p, A.PAnd):
        return f"({_pat(p.left)} and {_pat(p.right)})"
    if isinstance(p, A.POr):
        return f"({_pat(p.left)} or {_pat(p.right)})"
    if isinstance(p, A.PList):
        return "[" + ", ".join(("..." if s else "") + _pat(q) for q, s in p.items) + "]"
    if isinstance(p, A.PKeyword):
        args = ", ".join((f"{k}: " if k else "") + _pat(q) for k, q in p.args)
        return f"{p.name}[{args}]"
    if isinstance(p, A.PName):
        return p.name
    if isinstance(p, A.PValue):
        return _expr(p.expr)
    raise TypeError(f"cannot print pattern {type(p).__name__}")


def _type(t) -> str:
    if isinstance(t, A.TAny):
        return "?"
    if isinstance(t, A.TName):
        return t.name
    if isinstance(t, A.TVoid):
        return "void"
    if isinstance(t, A.TNullable):
        return f"Nullable {_type(t.inner)}"
    if isinstance(t, A.TStar):
        return f"{_type(t.inner)}*"
    if isinstance(t, A.TList):
        return "[" + ", ".join(_type(x) for x in t.elems) + "]"
    if isinstance(t, A.TMultiset):
        return "[| " + ", ".join(_type(x) for x in t.elems) + " |]"
    if isinstance(t, A.TSet):
        return "{| " + ", ".join(_type(x) for x in t.elems) + " |}"
    if isinstance(t, A.TProc):
        return f"(({', '.join(_type(x) for x in t.params)}) |-> {_type(t.result)})"
    raise TypeError(f"cannot print type {type(t).__name__}")
