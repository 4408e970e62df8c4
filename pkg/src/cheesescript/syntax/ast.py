"""AST node types.

Every node carries a ``span`` that is excluded from equality, so two parses
of differently formatted (or ASCII vs Unicode) sources compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .lexer import SourceSpan


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


class Node:
    span: Optional[SourceSpan]


class Expr(Node):
    pass


class Pattern(Node):
    pass


class TypeExpr(Node):
    pass


# ---------------------------------------------------------------- types


@dataclass(eq=True)
class TAny(TypeExpr):
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TName(TypeExpr):
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TVoid(TypeExpr):
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TNullable(TypeExpr):
    inner: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TStar(TypeExpr):
    """``T*`` inside a collection type: zero or more of T."""

    inner: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TList(TypeExpr):
    elems: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TMultiset(TypeExpr):
    elems: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TSet(TypeExpr):
    elems: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class TProc(TypeExpr):
    params: tuple
    result: TypeExpr
    span: Optional[SourceSpan] = _span()


# ---------------------------------------------------------------- patterns


@dataclass(eq=True)
class PWild(Pattern):
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PTypedWild(Pattern):
    type: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PBind(Pattern):
    name: str
    type: Optional[TypeExpr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PLit(Pattern):
    value: object
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PNull(Pattern):
    type: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PEq(Pattern):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PGuard(Pattern):
    op: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PThatIs(Pattern):
    base: Pattern
    pred: Pattern
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PAnd(Pattern):
    left: Pattern
    right: Pattern
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class POr(Pattern):
    left: Pattern
    right: Pattern
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PList(Pattern):
    items: tuple  # of (Pattern, spread: bool)
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PKeyword(Pattern):
    """``Leaf[x]`` or ``Complex[real: x1, imaginary: y1]``; keyword is None when positional."""

    name: str
    args: tuple  # of (keyword | None, Pattern)
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PName(Pattern):
    """A capitalized name: an exception/atom name, or the value it is bound to."""

    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PValue(Pattern):
    """A dotted constant such as ``DayName.Monday``; matches by equality."""

    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PProp(Pattern):
    """Proposition pattern used by the logic constructs, e.g. ``Human[x]``."""

    functor: str
    args: tuple  # of Pattern
    span: Optional[SourceSpan] = _span()


# ---------------------------------------------------------------- parameters & methods


@dataclass(eq=True)
class Param(Node):
    keyword: Optional[str]
    pattern: Pattern
    rigid: bool = False
    rest: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Arg(Node):
    kind: str  # pos | kw | spread
    expr: Expr
    name: Optional[str] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Method(Node):
    selector: str
    params: Optional[tuple]  # None: no parentheses, matches a bare message
    body: Expr
    override: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Handler(Node):
    kind: str  # case | else | catch | catch-else | rethrow
    pattern: Optional[Pattern]
    body: Optional[Expr]
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Signature(Node):
    selector: str
    params: Optional[tuple]
    result: TypeExpr
    span: Optional[SourceSpan] = _span()


# ---------------------------------------------------------------- expressions


@dataclass(eq=True)
class Literal(Expr):
    value: object
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class NullLit(Expr):
    type: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Identifier(Expr):
    name: str
    atom_ok: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Call(Expr):
    callee: Expr
    args: tuple  # of Arg
    atom_ok: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class BracketCall(Expr):
    callee: Expr
    args: tuple
    atom_ok: bool = False
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class DotSend(Expr):
    recipient: Expr
    name: str
    args: Optional[tuple]
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class UnOp(Expr):
    op: str
    operand: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Ascribe(Expr):
    """``Expression |-> Type``: a checked type ascription."""

    expr: Expr
    type: TypeExpr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Cast(Expr):
    type: Expr
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Conditional(Expr):
    subject: Expr
    handlers: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Catch(Expr):
    body: Expr
    handlers: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Let(Expr):
    bindings: tuple  # of (Pattern, Expr, mode) where mode is the connector before it: None | with | in
    body: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Definiendum(Node):
    name: str
    params: Optional[tuple] = None
    bracket: bool = False
    result: Optional[TypeExpr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Define(Expr):
    target: Definiendum
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Where(Expr):
    body: Expr
    defs: tuple  # of Define
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Lambda(Expr):
    params: tuple
    body: Expr
    result: Optional[TypeExpr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Receiver(Expr):
    """``(| methods |)``, optionally ``implements I (|...|) also implements J (|...|)``."""

    facets: tuple  # of (interface Expr | None, methods tuple | None)
    extends: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class InterfaceDecl(Expr):
    signatures: tuple
    extends: tuple = ()
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class VarDecl(Node):
    name: str
    type: Optional[TypeExpr]
    init: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class ActorDecl(Expr):
    params: tuple
    var_decls: tuple
    queue_names: tuple
    invariant: Optional[Expr]
    implements: tuple
    extends: Optional[Expr]
    methods: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class ListExpr(Expr):
    items: tuple  # of (Expr, spread: bool)
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class MultisetExpr(Expr):
    items: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class SetExpr(Expr):
    items: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class MapExpr(Expr):
    pairs: tuple  # of (key Expr, value Expr) or (Expr, None) for a spread
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class MultimapExpr(Expr):
    pairs: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Block(Expr):
    items: tuple
    separators: tuple  # "," or ";" between consecutive items
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Throw(Expr):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Assign(Node):
    name: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class DequeueCmd(Node):
    queue: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class ExprCmd(Node):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class AlsoContinuation(Expr):
    value: Expr
    commands: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Future(Expr):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Postpone(Expr):
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Inline(Expr):
    name: str
    initializers: tuple  # of (name, Expr)
    body: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class EnumDecl(Expr):
    names: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class JsonLiteral(Expr):
    """``kind`` is object | array | expr; object items are (key, JsonLiteral)."""

    kind: str
    items: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PropExpr(Expr):
    functor: str
    args: tuple  # of Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class LogicAssert(Expr):
    theory: Expr
    proposition: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class LogicWhenAssert(Expr):
    theory: Expr
    pattern: Pattern
    body: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class LogicGoal(Expr):
    theory: Expr
    pattern: Pattern
    body: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class LogicWhenGoal(Expr):
    theory: Expr
    pattern: Pattern
    body: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class PassThru(Expr):
    queue: Expr
    catch_handlers: Optional[tuple]
    catch_commands: tuple
    body: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Hole(Expr):
    expr: Expr
    commands: tuple  # commands performed after the hole responds
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Prep(Expr):
    commands: tuple
    tail: Expr  # PassThru | Hole
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Relay(Expr):
    selector: str
    args: Optional[tuple]
    handlers: tuple
    span: Optional[SourceSpan] = _span()


@dataclass(eq=True)
class Stay(Expr):
    selector: str
    args: Optional[tuple]
    handlers: tuple
    span: Optional[SourceSpan] = _span()
