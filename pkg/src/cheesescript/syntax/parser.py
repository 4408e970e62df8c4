"""Recursive-descent parser producing :mod:`cheesescript.syntax.ast` nodes.

Precedence, loosest first::

    where
    also
    catch
    ??
    => <=>
    or
    and
    not
    = != < > <= >=
    mod
    + - ##
    * /
    unary -
    Type <- Expr
    postfix: f(..)  f[..]  x.m(..)
"""

from __future__ import annotations

from dataclasses import replace

from . import ast as A
from .lexer import ParseError, SourceSpan, Token, tokenize

RELOPS = ("=", "!=", "<", ">", "<=", ">=")
SELECTOR_OPS = ("+", "-", "*", "/", "=", "<", ">", "<=", ">=", "!=", "##")


class _Backtrack(Exception):
    pass


def _capitalized(name: str) -> bool:
    return name[:1].isupper()


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self._failed: set = set()

    # ------------------------------------------------------------ token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.is_(kind, text)

    def at_p(self, *texts: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text in texts

    def at_r(self, *words: str) -> bool:
        return self.tok.kind == "reserved" and self.tok.text in words

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, message: str, expected: list[str] | None = None) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"{message}, found {found}", t.span, expected)

    def expect_p(self, text: str) -> Token:
        if not self.at_p(text):
            raise self.error(f"expected {text!r}", [text])
        return self.advance()

    def expect_r(self, word: str) -> Token:
        if not self.at_r(word):
            raise self.error(f"expected {word!r}", [word])
        return self.advance()

    def expect_ident(self) -> str:
        if self.tok.kind not in ("identifier", "message"):
            raise self.error("expected an identifier", ["identifier"])
        return self.advance().text

    def span_from(self, start: Token) -> SourceSpan:
        end = self.toks[max(self.pos - 1, 0)].span
        s = start.span
        if (end.end_line, end.end_col) < (s.start_line, s.start_col):
            end = s
        return SourceSpan(s.file, s.start_line, s.start_col, end.end_line, end.end_col)

    def mk(self, cls, start: Token, *args, **kwargs):
        return cls(*args, span=self.span_from(start), **kwargs)

    def attempt(self, fn):
        """Run ``fn``; on ParseError or _Backtrack, rewind and return None.

        Failures are remembered per (rule, position) so nested parentheses
        do not make speculative parses exponential.
        """
        saved = self.pos
        key = (fn.__name__, saved)
        if key in self._failed:
            return None
        try:
            return fn()
        except (ParseError, _Backtrack):
            self.pos = saved
            self._failed.add(key)
            return None

    # ------------------------------------------------------------ program

    def program(self) -> list[A.Node]:
        items: list[A.Node] = []
        while not self.at("eof"):
            if self.at_p(";;"):
                self.advance()
                continue
            items.append(self.item())
            if not self.at("eof"):
                self.expect_p(";;")
        return items

    def item(self) -> A.Node:
        d = self.attempt(self.definition)
        if d is not None:
            return d
        return self.expr()

    def definition(self) -> A.Define:
        start = self.tok
        target = self.definiendum()
        self.expect_p(":=:")
        body = self.expr()
        return self.mk(A.Define, start, target, body)

    def definiendum(self) -> A.Definiendum:
        start = self.tok
        if self.tok.kind != "identifier":
            raise _Backtrack()
        name = self.advance().text
        params, bracket, result = None, False, None
        if self.at_p("("):
            self.advance()
            params = self.params(")")
        elif self.at_p("["):
            self.advance()
            params = self.params("]")
            bracket = True
        if self.at_p("|->", "|->|->"):
            self.advance()
            if self.at_p("|->"):
                self.advance()
            result = self.type_expr()
        return self.mk(A.Definiendum, start, name, params, bracket, result)

    # ------------------------------------------------------------ expression levels

    def expr(self) -> A.Expr:
        start = self.tok
        e = self.also_level()
        while self.at_r("where"):
            self.advance()
            defs = []
            if self.at_p("("):
                self.advance()
                while True:
                    defs.append(self.definition())
                    if self.at_p(",") or self.at_r("with", "in"):
                        self.advance()
                        continue
                    break
                self.expect_p(")")
            else:
                defs.append(self.definition())
            e = self.mk(A.Where, start, e, tuple(defs))
        return e

    def also_level(self) -> A.Expr:
        start = self.tok
        e = self.catch_level()
        if self.at_r("also") and not self.peek().is_("reserved", "implements"):
            e = self.mk(A.AlsoContinuation, start, e, self.also_commands())
        return e

    def also_commands(self) -> tuple:
        cmds = []
        while self.at_r("also") and not self.peek().is_("reserved", "implements"):
            self.advance()
            cmds.append(self.command())
        return tuple(cmds)

    def command(self) -> A.Node:
        start = self.tok
        if self.at_r("dequeue"):
            self.advance()
            return self.mk(A.DequeueCmd, start, self.cond_level())
        if self.tok.kind == "identifier" and self.peek().is_("punct", "="):
            name = self.advance().text
            self.advance()
            return self.mk(A.Assign, start, name, self.cond_level())
        return self.mk(A.ExprCmd, start, self.cond_level())

    def catch_level(self) -> A.Expr:
        start = self.tok
        e = self.cond_level()
        while self.at_r("catch"):
            self.advance()
            e = self.mk(A.Catch, start, e, self.handler_list(allow_catch=False))
        return e

    def cond_level(self) -> A.Expr:
        start = self.tok
        e = self.imp_level()
        while self.at_p("??"):
            self.advance()
            e = self.mk(A.Conditional, start, e, self.handler_list(allow_catch=True))
        return e

    def imp_level(self) -> A.Expr:
        start = self.tok
        e = self.or_level()
        while self.at_p("=>", "<=>"):
            op = self.advance().text
            e = self.mk(A.BinOp, start, op, e, self.or_level())
        return e

    def or_level(self) -> A.Expr:
        start = self.tok
        e = self.and_level()
        while self.at_r("or"):
            self.advance()
            e = self.mk(A.BinOp, start, "or", e, self.and_level())
        return e

    def and_level(self) -> A.Expr:
        start = self.tok
        e = self.not_level()
        while self.at_r("and"):
            self.advance()
            e = self.mk(A.BinOp, start, "and", e, self.not_level())
        return e

    def not_level(self) -> A.Expr:
        start = self.tok
        if self.at_r("not"):
            self.advance()
            return self.mk(A.UnOp, start, "not", self.not_level())
        return self.cmp_level()

    def cmp_level(self) -> A.Expr:
        start = self.tok
        e = self.mod_level()
        if self.at_p(*RELOPS):
            op = self.advance().text
            e = self.mk(A.BinOp, start, op, e, self.mod_level())
        return e

    def mod_level(self) -> A.Expr:
        start = self.tok
        e = self.add_level()
        while self.at_r("mod"):
            self.advance()
            e = self.mk(A.BinOp, start, "mod", e, self.add_level())
        return e

    def add_level(self) -> A.Expr:
        start = self.tok
        e = self.mul_level()
        while self.at_p("+", "-", "##"):
            op = self.advance().text
            e = self.mk(A.BinOp, start, op, e, self.mul_level())
        return e

    def mul_level(self) -> A.Expr:
        start = self.tok
        e = self.unary()
        while self.at_p("*", "/"):
            op = self.advance().text
            e = self.mk(A.BinOp, start, op, e, self.unary())
        return e

    def unary(self) -> A.Expr:
        start = self.tok
        if self.at_p("-"):
            self.advance()
            operand = self.unary()
            if isinstance(operand, A.Literal) and type(operand.value) in (int, float):
                return self.mk(A.Literal, start, -operand.value)
            return self.mk(A.UnOp, start, "-", operand)
        return self.cast_level()

    def cast_level(self) -> A.Expr:
        start = self.tok
        e = self.postfix()
        if self.at_p("<-"):
            self.advance()
            e = self.mk(A.Cast, start, e, self.unary())
        return e

    def postfix(self) -> A.Expr:
        start = self.tok
        e = self.primary()
        while True:
            if self.at_p("("):
                self.advance()
                e = self.mk(A.Call, start, e, self.args(")"))
            elif self.at_p("["):
                self.advance()
                e = self.mk(A.BracketCall, start, e, self.args("]"))
            elif self.at_p(".") and self.peek().kind in ("identifier", "message"):
                self.advance()
                name = self.advance().text
                args = None
                if self.at_p("("):
                    self.advance()
                    args = self.args(")")
                e = self.mk(A.DotSend, start, e, name, args)
            else:
                return e

    def args(self, close: str) -> tuple:
        out = []
        while not self.at_p(close):
            start = self.tok
            if self.at_p("..."):
                self.advance()
                out.append(self.mk(A.Arg, start, "spread", self.also_level()))
            elif self.tok.kind == "identifier" and self.peek().is_("punct", ":"):
                name = self.advance().text
                self.advance()
                out.append(self.mk(A.Arg, start, "kw", self.also_level(), name))
            else:
                out.append(self.mk(A.Arg, start, "pos", self.also_level()))
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(close)
        return tuple(out)

    # ------------------------------------------------------------ primaries

    def primary(self) -> A.Expr:
        t = self.tok
        k = t.kind
        if k in ("int", "float", "string"):
            self.advance()
            return self.mk(A.Literal, t, t.value)
        if k in ("identifier", "message"):
            self.advance()
            return self.mk(A.Identifier, t, t.text)
        if k == "reserved":
            handler = getattr(self, "p_" + t.text, None)
            if handler is not None:
                return handler()
            raise self.error("unexpected reserved word")
        if k == "punct":
            if t.text == "(":
                lam = self.attempt(self.lambda_expr)
                if lam is not None:
                    return lam
                self.advance()
                e = self.expr()
                self.expect_p(")")
                return e
            if t.text == "(|":
                return self.receiver_body_only()
            if t.text == "[":
                return self.list_expr()
            if t.text == "[|":
                return self.bag_expr("[|", "|]", A.MultisetExpr)
            if t.text == "{|":
                return self.bag_expr("{|", "|}", A.SetExpr)
            if t.text == "{":
                return self.block()
            if t.text == "|-":
                return self.logic_assert()
            if t.text == "?":
                return self.logic_goal()
        raise self.error("expected an expression", ["expression"])

    def lambda_expr(self) -> A.Lambda:
        start = self.expect_p("(")
        params = self.params(")")
        result = None
        if self.at_p("|->"):
            self.advance()
            result = self.type_expr()
        if not self.at_p("->"):
            raise _Backtrack()
        self.advance()
        return self.mk(A.Lambda, start, params, self.also_level(), result)

    def p_true(self):
        t = self.advance()
        return self.mk(A.Literal, t, True)

    def p_false(self):
        t = self.advance()
        return self.mk(A.Literal, t, False)

    def p_void(self):
        from ..kernel.values import VOID

        t = self.advance()
        return self.mk(A.Literal, t, VOID)

    def p_null(self):
        t = self.advance()
        return self.mk(A.NullLit, t, self.type_expr())

    def p_throw(self):
        t = self.advance()
        operand = _atomize(self.cond_level(), deep=False)
        return self.mk(A.Throw, t, operand)

    def p_future(self):
        t = self.advance()
        return self.mk(A.Future, t, self.cond_level())

    def p_postpone(self):
        t = self.advance()
        return self.mk(A.Postpone, t, self.cond_level())

    def p_let(self):
        start = self.advance()
        bindings = []
        mode = None
        while True:
            pat = self.pattern()
            self.expect_p("=")
            rhs = self.catch_level()
            bindings.append((pat, rhs, mode))
            if self.at_r("with", "in"):
                mode = self.advance().text
                continue
            break
        self.expect_p("->")
        return self.mk(A.Let, start, tuple(bindings), self.also_level())

    def p_inline(self):
        start = self.advance()
        name = self.expect_ident()
        self.expect_p("(")
        inits = []
        while not self.at_p(")"):
            ident = self.expect_ident()
            self.expect_p("=")
            inits.append((ident, self.also_level()))
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(")")
        self.expect_p("->")
        body = self.also_level()
        check_tail_calls(name, body)
        return self.mk(A.Inline, start, name, tuple(inits), body)

    def p_enumerate(self):
        start = self.advance()
        self.expect_p("(")
        names = []
        while not self.at_p(")"):
            names.append(self.expect_ident())
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(")")
        if len(set(names)) != len(names):
            raise ParseError("duplicate enumeration member", self.span_from(start))
        return self.mk(A.EnumDecl, start, tuple(names))

    def p_map(self):
        return self.map_like(A.MapExpr)

    def p_multimap(self):
        return self.map_like(A.MultimapExpr)

    def map_like(self, cls):
        start = self.advance()
        self.expect_p("(")
        pairs = []
        while not self.at_p(")"):
            if self.at_p("..."):
                self.advance()
                pairs.append((self.cond_level(), None))
            else:
                key = self.cond_level()
                self.expect_p("->")
                pairs.append((key, self.cond_level()))
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(")")
        return self.mk(cls, start, tuple(pairs))

    def p_JSON(self):
        self.advance()
        return self.json_value(prefixed=True)

    def json_value(self, prefixed: bool) -> A.JsonLiteral:
        start = self.tok
        if self.at_r("JSON"):
            self.advance()
            return self.json_value(prefixed=True)
        if self.at_p("{"):
            self.advance()
            items = []
            while not self.at_p("}"):
                if self.tok.kind != "string":
                    raise self.error("expected a JSON object key", ["string"])
                key = self.advance().value
                self.expect_p(":")
                items.append((key, self.json_value(prefixed=False)))
                if not self.at_p(","):
                    break
                self.advance()
            self.expect_p("}")
            return self.mk(A.JsonLiteral, start, "object", tuple(items))
        if self.at_p("["):
            self.advance()
            items = []
            while not self.at_p("]"):
                items.append(self.json_value(prefixed=False))
                if not self.at_p(","):
                    break
                self.advance()
            self.expect_p("]")
            return self.mk(A.JsonLiteral, start, "array", tuple(items))
        if prefixed and self.at_p("("):
            self.advance()
            e = self.expr()
            self.expect_p(")")
            return self.mk(A.JsonLiteral, start, "expr", (e,))
        return self.mk(A.JsonLiteral, start, "expr", (self.cond_level(),))

    def p_interface(self):
        start = self.advance()
        extends = []
        if self.at_r("extends"):
            self.advance()
            extends.append(self.postfix_no_call())
            while self.at_p(",") and self.peek().kind == "identifier":
                self.advance()
                extends.append(self.postfix_no_call())
        sigs = []
        if self.at_p("("):
            self.advance()
            while not self.at_p(")"):
                sigs.append(self.signature())
                if not self.at_p(","):
                    break
                self.advance()
            self.expect_p(")")
        return self.mk(A.InterfaceDecl, start, tuple(sigs), tuple(extends))

    def postfix_no_call(self) -> A.Expr:
        start = self.tok
        e = self.mk(A.Identifier, start, self.expect_ident())
        while self.at_p(".") and self.peek().kind == "identifier":
            self.advance()
            e = self.mk(A.DotSend, start, e, self.advance().text, None)
        return e

    def signature(self) -> A.Signature:
        start = self.tok
        selector, params = self.message_pattern()
        if self.at_p("|->|->"):
            self.advance()
        else:
            self.expect_p("|->")
            self.expect_p("|->")
        return self.mk(A.Signature, start, selector, params, self.type_expr())

    def p_implements(self):
        start = self.tok
        facets = []
        while True:
            self.expect_r("implements")
            iface = self.postfix_no_call()
            methods = self.methods() if self.at_p("(|") else None
            facets.append((iface, methods))
            if self.at_r("also") and self.peek().is_("reserved", "implements"):
                self.advance()
                continue
            break
        return self.mk(A.Receiver, start, tuple(facets), None)

    def p_extends(self):
        start = self.advance()
        base = self.postfix_no_call()
        methods = self.methods() if self.at_p("(|") else ()
        return self.mk(A.Receiver, start, ((None, methods),), base)

    def receiver_body_only(self):
        start = self.tok
        return self.mk(A.Receiver, start, ((None, self.methods()),), None)

    def methods(self) -> tuple:
        self.expect_p("(|")
        out = []
        while not self.at_p("|)"):
            out.append(self.method())
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p("|)")
        return tuple(out)

    def method(self) -> A.Method:
        start = self.tok
        override = False
        if self.at_r("override"):
            self.advance()
            override = True
        selector, params = self.message_pattern()
        if self.at_r("override"):
            self.advance()
            override = True
        self.expect_p("->")
        return self.mk(A.Method, start, selector, params, self.also_level(), override)

    def message_pattern(self) -> tuple:
        if self.at_p("?"):
            self.advance()
            return "?", None
        if self.tok.kind in ("identifier", "message"):
            selector = self.advance().text
        elif self.at_p(*SELECTOR_OPS):
            selector = self.advance().text
        else:
            raise self.error("expected a message pattern", ["identifier"])
        params = None
        if self.at_p("("):
            self.advance()
            params = self.params(")")
        return selector, params

    def p_actor(self):
        start = self.advance()
        self.expect_p("(")
        params = self.params(")")
        var_decls, queues, implements = [], [], []
        invariant = extends = None
        while not self.at_p("(|"):
            if self.at_p(","):
                self.advance()
            elif self.at_r("queue"):
                self.advance()
                queues.append(self.expect_ident())
            elif self.at_r("queues"):
                self.advance()
                queues.append(self.expect_ident())
                while (
                    self.at_p(",")
                    and self.peek().kind == "identifier"
                    and not self.peek(2).is_("punct", "=")
                    and not self.peek(2).is_("punct", "|->")
                ):
                    self.advance()
                    queues.append(self.expect_ident())
            elif self.at_r("invariant"):
                self.advance()
                invariant = self.imp_level()
            elif self.at_r("implements"):
                self.advance()
                implements.append(self.postfix_no_call())
            elif self.at_r("extends"):
                self.advance()
                extends = self.postfix()
            elif self.tok.kind == "identifier":
                vstart = self.tok
                name = self.advance().text
                vtype = None
                if self.at_p("|->"):
                    self.advance()
                    vtype = self.type_expr()
                self.expect_p("=")
                var_decls.append(self.mk(A.VarDecl, vstart, name, vtype, self.cond_level()))
            else:
                raise self.error("expected an actor clause or '(|'", ["(|"])
        methods = self.methods()
        return self.mk(
            A.ActorDecl, start, params, tuple(var_decls), tuple(queues), invariant,
            tuple(implements), extends, methods,
        )

    def p_passThru(self):
        start = self.advance()
        queue = self.cond_level()
        handlers = None
        cmds: tuple = ()
        if self.at_r("catch"):
            self.advance()
            if self.tok.is_("identifier", "rethrow"):
                ht = self.advance()
                handlers = (self.mk(A.Handler, ht, "rethrow", None, None),)
            else:
                handlers = self.handler_list(allow_catch=False)
            cmds = self.also_commands()
        if self.at_p("->"):
            self.advance()
        body = self.also_level()
        return self.mk(A.PassThru, start, queue, handlers, cmds, body)

    def p_prep(self):
        start = self.advance()
        cmds = [self.command()]
        while self.at_r("also"):
            self.advance()
            cmds.append(self.command())
        if self.at_r("passThru"):
            tail = self.p_passThru()
        elif self.at_r("hole"):
            tail = self.p_hole()
        else:
            raise self.error("expected 'passThru' or 'hole' after prep", ["passThru", "hole"])
        return self.mk(A.Prep, start, tuple(cmds), tail)

    def p_hole(self):
        start = self.advance()
        e = self.catch_level()
        return self.mk(A.Hole, start, e, self.also_commands())

    def p_relay(self):
        return self.relay_like(A.Relay)

    def p_stay(self):
        return self.relay_like(A.Stay)

    def relay_like(self, cls):
        start = self.advance()
        selector = self.expect_ident()
        args = None
        if self.at_p("("):
            self.advance()
            args = self.args(")")
        handlers: tuple = ()
        if self.at_p("??"):
            self.advance()
            handlers = self.handler_list(allow_catch=True)
        return self.mk(cls, start, selector, args, handlers)

    def p_when(self):
        start = self.advance()
        if self.at_p("|-"):
            self.advance()
            theory = self.theory_ref()
            pat = self.pattern()
            self.expect_p("->")
            return self.mk(A.LogicWhenAssert, start, theory, pat, self.also_level())
        if self.at_p("?"):
            self.advance()
            theory = self.theory_ref()
            pat = self.pattern()
            self.expect_p("->")
            return self.mk(A.LogicWhenGoal, start, theory, pat, self.also_level())
        raise self.error("expected '|-' or '?' after when", ["|-", "?"])

    def theory_ref(self) -> A.Identifier:
        t = self.tok
        return self.mk(A.Identifier, t, self.expect_ident())

    def logic_assert(self):
        start = self.advance()
        theory = self.theory_ref()
        prop = _atomize(self.postfix(), deep=True)
        return self.mk(A.LogicAssert, start, theory, prop)

    def logic_goal(self):
        start = self.advance()
        theory = self.theory_ref()
        pat = self.pattern()
        body = None
        if self.at_p("->"):
            self.advance()
            body = self.also_level()
        return self.mk(A.LogicGoal, start, theory, pat, body)

    # ------------------------------------------------------------ collections

    def list_expr(self):
        start = self.advance()
        items = []
        while not self.at_p("]"):
            items.append(self.collection_item())
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p("]")
        return self.mk(A.ListExpr, start, tuple(items))

    def collection_item(self) -> tuple:
        spread = False
        if self.at_p("..."):
            self.advance()
            spread = True
        start = self.tok
        e = self.catch_level()
        if self.at_p("|->"):
            self.advance()
            e = self.mk(A.Ascribe, start, e, self.type_expr())
        return (e, spread)

    def bag_expr(self, opener: str, closer: str, cls):
        start = self.advance()
        items = []
        while not self.at_p(closer):
            items.append(self.collection_item())
            if self.at_p(","):
                self.advance()
        self.expect_p(closer)
        return self.mk(cls, start, tuple(items))

    def block(self):
        start = self.advance()
        items, seps = [], []
        while not self.at_p("}"):
            items.append(self.expr())
            if self.at_p(",", ";"):
                seps.append(self.advance().text)
                continue
            break
        self.expect_p("}")
        if len(seps) == len(items) and seps:
            seps.pop()  # trailing separator
        return self.mk(A.Block, start, tuple(items), tuple(seps))

    # ------------------------------------------------------------ handlers

    def handler_list(self, allow_catch: bool) -> tuple:
        self.expect_p("(")
        out = []
        seen_literals = []
        while not self.at_p(")"):
            h = self.handler(allow_catch)
            if h.kind == "case" and isinstance(h.pattern, A.PLit):
                for prev in seen_literals:
                    if type(prev.value) is type(h.pattern.value) and prev.value == h.pattern.value:
                        raise ParseError(
                            f"conditional patterns must be disjoint: {h.pattern.value!r} appears twice",
                            h.pattern.span,
                        )
                seen_literals.append(h.pattern)
            out.append(h)
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(")")
        return tuple(out)

    def handler(self, allow_catch: bool) -> A.Handler:
        start = self.tok
        kind = "case"
        if allow_catch and self.at_r("catch"):
            self.advance()
            kind = "catch"
            if self.tok.is_("identifier", "rethrow") and not self.peek().is_("punct", "->"):
                self.advance()
                return self.mk(A.Handler, start, "rethrow", None, None)
        if self.at_r("else"):
            self.advance()
            kind = "catch-else" if kind == "catch" else "else"
            pat = None if self.at_p("->") else self.pattern()
        else:
            pat = self.pattern()
        self.expect_p("->")
        return self.mk(A.Handler, start, kind, pat, self.also_level())

    # ------------------------------------------------------------ patterns

    def pattern(self) -> A.Pattern:
        start = self.tok
        base = self.pattern_atom()
        if self.at_r("thatIs"):
            self.advance()
            base = self.mk(A.PThatIs, start, base, self.pattern_or())
        return base

    def pattern_or(self) -> A.Pattern:
        start = self.tok
        p = self.pattern_and()
        while self.at_r("or"):
            self.advance()
            p = self.mk(A.POr, start, p, self.pattern_and())
        return p

    def pattern_and(self) -> A.Pattern:
        start = self.tok
        p = self.pattern()
        while self.at_r("and"):
            self.advance()
            p = self.mk(A.PAnd, start, p, self.pattern())
        return p

    def pattern_atom(self) -> A.Pattern:
        t = self.tok
        if self.at_p("?"):
            self.advance()
            if self.at_p("|->"):
                self.advance()
                return self.mk(A.PTypedWild, t, self.type_expr())
            return self.mk(A.PWild, t)
        if self.at_p("="):
            self.advance()
            return self.mk(A.PEq, t, self.postfix())
        if self.at_p("("):
            self.advance()
            if self.at_p(*RELOPS):
                op = self.advance().text
                e = self.mod_level()
                self.expect_p(")")
                return self.mk(A.PGuard, t, op, e)
            p = self.pattern_or()
            self.expect_p(")")
            return p
        if self.at_p("["):
            self.advance()
            items = []
            while not self.at_p("]"):
                spread = False
                if self.at_p("..."):
                    self.advance()
                    spread = True
                items.append((self.pattern(), spread))
                if self.at_p(","):
                    self.advance()
                elif not self.at_p("..."):
                    break
            self.expect_p("]")
            return self.mk(A.PList, t, tuple(items))
        if t.kind in ("int", "float", "string"):
            self.advance()
            return self.mk(A.PLit, t, t.value)
        if self.at_p("-") and self.peek().kind in ("int", "float"):
            self.advance()
            v = self.advance().value
            return self.mk(A.PLit, t, -v)
        if self.at_r("true", "false"):
            self.advance()
            return self.mk(A.PLit, t, t.text == "true")
        if self.at_r("void"):
            from ..kernel.values import VOID

            self.advance()
            return self.mk(A.PLit, t, VOID)
        if self.at_r("null"):
            self.advance()
            return self.mk(A.PNull, t, self.type_expr())
        if t.kind == "identifier":
            name = self.advance().text
            if _capitalized(name):
                if self.at_p("[", "("):
                    close = "]" if self.advance().text == "[" else ")"
                    args = []
                    while not self.at_p(close):
                        kw = None
                        if self.tok.kind == "identifier" and self.peek().is_("punct", ":"):
                            kw = self.advance().text
                            self.advance()
                        args.append((kw, self.pattern()))
                        if not self.at_p(","):
                            break
                        self.advance()
                    self.expect_p(close)
                    return self.mk(A.PKeyword, t, name, tuple(args))
                if self.at_p(".") and self.peek().kind == "identifier":
                    e = self.mk(A.Identifier, t, name)
                    while self.at_p(".") and self.peek().kind == "identifier":
                        self.advance()
                        e = self.mk(A.DotSend, t, e, self.advance().text, None)
                    return self.mk(A.PValue, t, e)
                return self.mk(A.PName, t, name)
            ptype = None
            if self.at_p("|->"):
                self.advance()
                ptype = self.type_expr()
            return self.mk(A.PBind, t, name, ptype)
        raise self.error("expected a pattern", ["pattern"])

    # ------------------------------------------------------------ parameters

    def params(self, close: str) -> tuple:
        out: list[A.Param] = []
        while not self.at_p(close):
            out.extend(self.param_group())
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(close)
        return tuple(out)

    def param_group(self) -> list[A.Param]:
        if self.at_p("("):
            grp = self.attempt(self._paren_group)
            if grp is not None:
                return grp
        return [self.param()]

    def _paren_group(self) -> list[A.Param]:
        self.expect_p("(")
        inner = self.params(")")
        self.expect_p("|->")
        t = self.type_expr()
        rigid = False
        if self.at_r("rigid"):
            self.advance()
            rigid = True
        return [
            replace(p, pattern=_with_type(p.pattern, t), rigid=p.rigid or rigid) for p in inner
        ]

    def param(self) -> A.Param:
        start = self.tok
        rest = False
        keyword = None
        if self.at_p("..."):
            self.advance()
            rest = True
        elif self.tok.kind == "identifier" and self.peek().is_("punct", ":"):
            keyword = self.advance().text
            self.advance()
        pat = self.pattern()
        rigid = False
        if self.at_r("rigid"):
            self.advance()
            rigid = True
        return self.mk(A.Param, start, keyword, pat, rigid, rest)

    # ------------------------------------------------------------ types

    def type_expr(self) -> A.TypeExpr:
        t = self.tok
        if self.at_p("?"):
            self.advance()
            return self.mk(A.TAny, t)
        if self.at_r("void"):
            self.advance()
            return self.mk(A.TVoid, t)
        if self.at_r("Nullable"):
            self.advance()
            return self.mk(A.TNullable, t, self.type_expr())
        if self.tok.kind == "identifier":
            return self.mk(A.TName, t, self.advance().text)
        for opener, closer, cls in (("[", "]", A.TList), ("[|", "|]", A.TMultiset), ("{|", "|}", A.TSet)):
            if self.at_p(opener):
                self.advance()
                return self.mk(cls, t, self.type_elems(closer))
        if self.at_p("("):
            self.advance()
            elems = []
            while not self.at_p(")"):
                elems.append(self.type_expr())
                if not self.at_p(","):
                    break
                self.advance()
            self.expect_p(")")
            if self.at_p("|->", "|->|->"):
                self.advance()
                return self.mk(A.TProc, t, tuple(elems), self.type_expr())
            if len(elems) == 1:
                return elems[0]
            raise self.error("expected '|->' after a parameter type list", ["|->"])
        raise self.error("expected a type", ["type"])

    def type_elems(self, closer: str) -> tuple:
        elems = []
        while not self.at_p(closer):
            start = self.tok
            e = self.type_expr()
            if self.at_p("*"):
                self.advance()
                e = self.mk(A.TStar, start, e)
            elems.append(e)
            if not self.at_p(","):
                break
            self.advance()
        self.expect_p(closer)
        return tuple(elems)


# ---------------------------------------------------------------- helpers


def _with_type(p: A.Pattern, t: A.TypeExpr) -> A.Pattern:
    if isinstance(p, A.PBind) and p.type is None:
        return replace(p, type=t)
    if isinstance(p, A.PWild):
        return A.PTypedWild(t, span=p.span)
    return p


def _atomize(node: A.Expr, deep: bool) -> A.Expr:
    """Mark capitalized heads so an unbound name evaluates to an atom."""
    if isinstance(node, A.Identifier) and _capitalized(node.name):
        return replace(node, atom_ok=True)
    if isinstance(node, (A.Call, A.BracketCall)):
        callee = node.callee
        if isinstance(callee, A.Identifier) and _capitalized(callee.name):
            callee = replace(callee, atom_ok=True)
        args = node.args
        if deep:
            args = tuple(replace(a, expr=_atomize(a.expr, True)) for a in args)
        return replace(node, callee=callee, args=args, atom_ok=True)
    return node


def _self_calls(name: str, node) -> list:
    """All calls of ``name`` anywhere inside ``node``."""
    found = []

    def walk(n):
        if isinstance(n, A.Call) and isinstance(n.callee, A.Identifier) and n.callee.name == name:
            found.append(n)
        if isinstance(n, A.Node):
            for v in vars(n).values():
                walk(v)
        elif isinstance(n, tuple):
            for v in n:
                walk(v)

    walk(node)
    return found


def check_tail_calls(name: str, body: A.Expr) -> None:
    """Reject any call of ``name`` that is not in tail position."""
    tail: list = []

    def collect(e):
        if isinstance(e, A.Call) and isinstance(e.callee, A.Identifier) and e.callee.name == name:
            tail.append(e)
            for a in e.args:
                for c in _self_calls(name, a):
                    raise ParseError(f"inline call of {name} is not a tail call", c.span)
        elif isinstance(e, A.Conditional):
            for c in _self_calls(name, e.subject):
                raise ParseError(f"inline call of {name} is not a tail call", c.span)
            for h in e.handlers:
                if h.pattern is not None:
                    for c in _self_calls(name, h.pattern):
                        raise ParseError(f"inline call of {name} is not a tail call", c.span)
                if h.body is not None:
                    collect(h.body)
        elif isinstance(e, A.Let):
            for c in _self_calls(name, e.bindings):
                raise ParseError(f"inline call of {name} is not a tail call", c.span)
            collect(e.body)
        else:
            for c in _self_calls(name, e):
                raise ParseError(f"inline call of {name} is not a tail call", c.span)

    collect(body)


# ---------------------------------------------------------------- entry points


def parse_program(source: str, file: str = "<input>") -> list[A.Node]:
    return Parser(tokenize(source, file)).program()


def parse_expression(source: str, file: str = "<input>") -> A.Node:
    p = Parser(tokenize(source, file))
    node = p.item()
    if p.at_p(";;"):
        p.advance()
    if not p.at("eof"):
        raise p.error("expected end of input", ["end of input"])
    return node


def parse_pattern(source: str, file: str = "<input>") -> A.Pattern:
    p = Parser(tokenize(source, file))
    pat = p.pattern()
    if not p.at("eof"):
        raise p.error("expected end of input", ["end of input"])
    return pat
