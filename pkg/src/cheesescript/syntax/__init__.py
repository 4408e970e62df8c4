"""Lexing, parsing, and printing of cheesescript source."""

from .lexer import ParseError, SourceSpan, Token, tokenize
from .parser import parse_expression, parse_pattern, parse_program
from .printer import pretty

__all__ = [
    "ParseError",
    "SourceSpan",
    "Token",
    "parse_expression",
    "parse_pattern",
    "parse_program",
    "pretty",
    "tokenize",
]
