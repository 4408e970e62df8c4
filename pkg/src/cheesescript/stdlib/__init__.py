"""Built-in procedures, JSON text support and the shipped example programs."""

from .builtins import install
from .corpus import corpus_names, corpus_source
from .jsontext import parse_json, print_json

__all__ = ["corpus_names", "corpus_source", "install", "parse_json", "print_json"]
