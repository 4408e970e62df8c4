"""Values, environments, pattern matching and the tree-walking evaluator."""

from .api import (
    default_interpreter, eval_cast, eval_catch, eval_conditional, eval_let, eval_where,
    evaluate, structural_equal,
)
from .env import Thrown, env_bind, env_find, env_lookup, throw
from .evaluator import Deadlock, Interpreter, ReturnedC, StepLimitExceeded, ThrewC
from .patterns import match
from .values import show, vkey

eval = evaluate  # noqa: A001 - the operation is called eval

__all__ = [
    "Deadlock", "Interpreter", "ReturnedC", "StepLimitExceeded", "ThrewC", "Thrown",
    "default_interpreter", "env_bind", "env_find", "env_lookup", "eval", "eval_cast",
    "eval_catch", "eval_conditional", "eval_let", "eval_where", "evaluate", "match",
    "show", "structural_equal", "throw", "vkey",
]
