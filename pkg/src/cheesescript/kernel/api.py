"""Function-style entry points over a sequential ``Interpreter``.

These evaluate without the actor runtime: blocks run left to right and
concurrency constructs throw ``Unsupported``.  Each returns a completion
(``ReturnedC`` or ``ThrewC``) rather than raising.
"""

from __future__ import annotations

from ..syntax import ast as A
from ..syntax import parse_expression
from .env import RecFrame, Thrown
from .evaluator import Interpreter, ReturnedC, ThrewC


def default_interpreter() -> Interpreter:
    """A fresh sequential interpreter whose globals hold the built-ins."""
    from ..stdlib.builtins import install

    it = Interpreter()
    base = RecFrame(None, is_global=True)
    install(it, base)
    it.globals = RecFrame(base, is_global=True)
    return it


def _complete(fn):
    try:
        return ReturnedC(fn())
    except Thrown as t:
        return ThrewC(t.value)


def _setup(interp, env):
    interp = interp or default_interpreter()
    return interp, interp.globals if env is None else env


def evaluate(e, env=None, interp=None):
    """Evaluate an expression node (or source text) to a completion."""
    interp, env = _setup(interp, env)
    if isinstance(e, str):
        e = parse_expression(e)
    return _complete(lambda: interp.ev(e, env))


def eval_conditional(subject, handlers, env=None, interp=None):
    """Match an already computed subject against ``handlers``."""
    interp, env = _setup(interp, env)
    return _complete(lambda: interp.run_handlers(subject, handlers, env))


def eval_let(bindings, body, env=None, interp=None):
    interp, env = _setup(interp, env)
    return _complete(lambda: interp.ev(A.Let(tuple(bindings), body), env))


def eval_where(body, defs, env=None, interp=None):
    interp, env = _setup(interp, env)
    return _complete(lambda: interp.ev(A.Where(body, tuple(defs)), env))


def eval_cast(type_value, v, interp=None):
    interp = interp or default_interpreter()
    return _complete(lambda: interp.cast(type_value, v))


def eval_catch(body, handlers, env=None, interp=None):
    interp, env = _setup(interp, env)
    return _complete(lambda: interp.ev(A.Catch(body, tuple(handlers)), env))


def structural_equal(a, b, interp=None) -> bool:
    return (interp or Interpreter()).equal(a, b)
