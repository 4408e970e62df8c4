"""cheesescript: an interpreter and serialized-actor runtime for a core of ActorScript."""

from .kernel import evaluate
from .runtime import Machine, explore_interleavings, scheduler_run
from .syntax import ParseError, parse_expression, parse_program, pretty

__version__ = "0.1.0"

__all__ = [
    "Machine", "ParseError", "evaluate", "explore_interleavings", "parse_expression",
    "parse_program", "pretty", "scheduler_run",
]
