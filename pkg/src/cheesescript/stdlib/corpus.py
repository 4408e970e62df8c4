"""Access to the example programs shipped with the package."""

from __future__ import annotations

from importlib import resources


def corpus_names() -> list[str]:
    root = resources.files(__package__) / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".acts"))


def corpus_source(name: str) -> str:
    """Source text of ``name`` (with or without the ``.acts`` suffix)."""
    if not name.endswith(".acts"):
        name += ".acts"
    return (resources.files(__package__) / "corpus" / name).read_text(encoding="utf-8")
