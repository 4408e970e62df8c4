"""Theories with assertions, forward chaining and backward chaining."""

from .theory import Theory, Var, is_ground, match_term, saturate, unify

__all__ = ["Theory", "Var", "is_ground", "match_term", "saturate", "unify"]
