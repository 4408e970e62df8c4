"""Tokenizer for cheesescript source.

Unicode glyphs and their ASCII spellings produce identical tokens: the
token text is always the ASCII form, so ``x ↦ Integer`` and ``x |-> Integer``
tokenize the same way (only the spans differ).
"""

from __future__ import annotations

from dataclasses import dataclass, field

RESERVED = frozenset(
    """
    actor queue queues hole passThru dequeue prep also become throw catch else
    let with in where interface implements extends override relay stay
    invariant future postpone inline enumerate map multimap JSON null Nullable
    rigid true false void when thatIs and or not mod
    """.split()
)

# Longest first: the lexer tries these in order.
ASCII_PUNCT = (
    "|->|->", ":=:", "<=>", "|->", "...", ";;", "??", "->", "<-", "<=", ">=",
    "!=", "=>", "##", "|-", "(|", "|)", "[|", "|]", "{|", "|}",
    "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "=", "<", ">", "+", "-",
    "*", "/", "?",
)

UNICODE_PUNCT = {
    "↦↦": "|->|->",
    "↦": "|->",
    "→": "->",
    "≡": ":=:",
    "⊢": "|-",
    "←": "<-",
    "≥": ">=",
    "≤": "<=",
    "≠": "!=",
    "⇒": "=>",
    "⇔": "<=>",
    "…": "...",
    "⦅": "(|",
    "⦆": "|)",
}

LINE_COMMENT_GLYPHS = ("①", "ⓘ")
OPEN_QUOTES = {'"': '"', "“": "”"}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | reserved | message | int | float | string | punct | comment | eof
    text: str
    span: SourceSpan = field(compare=False)
    value: object = field(default=None, compare=False)

    def is_(self, kind: str, text: str | None = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan | None = None, expected: list[str] | None = None):
        assert message
        self.message = message
        self.span = span
        self.expected = list(expected or [])
        where = f"{span}: " if span else ""
        super().__init__(f"{where}{message}")


def _ident_start(ch: str) -> bool:
    return ch == "_" or ch.isalpha()


def _ident_part(ch: str) -> bool:
    return ch == "_" or ch.isalnum()


def tokenize(source: str, file: str = "<input>", keep_comments: bool = False) -> list[Token]:
    """Split ``source`` into tokens, ending with an ``eof`` token."""
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    def emit(kind: str, text: str, sl: int, sc: int, value: object = None) -> None:
        toks.append(Token(kind, text, SourceSpan(file, sl, sc, line, col), value))

    while i < n:
        ch = source[i]
        sl, sc = line, col
        if ch.isspace() or ch in "°":
            advance(1)
            continue
        if source.startswith("//", i) or ch in LINE_COMMENT_GLYPHS:
            j = source.find("\n", i)
            j = n if j < 0 else j
            text = source[i:j]
            advance(j - i)
            if keep_comments:
                emit("comment", text, sl, sc)
            continue
        if source.startswith("/*", i):
            depth, j = 0, i
            while j < n:
                if source.startswith("/*", j):
                    depth += 1
                    j += 2
                elif source.startswith("*/", j):
                    depth -= 1
                    j += 2
                    if depth == 0:
                        break
                else:
                    j += 1
            if depth:
                raise ParseError("unterminated block comment", SourceSpan(file, sl, sc, sl, sc), ["*/"])
            text = source[i:j]
            advance(j - i)
            if keep_comments:
                emit("comment", text, sl, sc)
            continue
        if ch in OPEN_QUOTES:
            close = OPEN_QUOTES[ch]
            j = i + 1
            buf = []
            while j < n and source[j] != close:
                c = source[j]
                if c == "\\" and j + 1 < n:
                    nxt = source[j + 1]
                    buf.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
                    j += 2
                    continue
                buf.append(c)
                j += 1
            if j >= n:
                raise ParseError("unterminated string literal", SourceSpan(file, sl, sc, sl, sc), [close])
            advance(j + 1 - i)
            emit("string", "".join(buf), sl, sc, "".join(buf))
            continue
        if ch == "€" and i + 1 < n and source[i + 1].isdigit():
            advance(1)
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_float = False
            if j + 1 < n and source[j] == "." and source[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            advance(j - i)
            if is_float:
                emit("float", text, sl, sc, float(text))
            else:
                emit("int", text, sl, sc, int(text))
            continue
        if source.startswith("<i>", i):
            j = source.find("</i>", i + 3)
            name = source[i + 3 : j] if j >= 0 else ""
            if j < 0 or not name.isidentifier():
                raise ParseError("malformed message name", SourceSpan(file, sl, sc, sl, sc), ["</i>"])
            advance(j + 4 - i)
            emit("message", name, sl, sc)
            continue
        if _ident_start(ch):
            j = i + 1
            while j < n and _ident_part(source[j]):
                j += 1
            while j < n and source[j] == "'":
                j += 1
            text = source[i:j]
            advance(j - i)
            emit("reserved" if text in RESERVED else "identifier", text, sl, sc)
            continue
        for glyph, ascii_form in UNICODE_PUNCT.items():
            if source.startswith(glyph, i):
                advance(len(glyph))
                emit("punct", ascii_form, sl, sc)
                break
        else:
            for p in ASCII_PUNCT:
                if source.startswith(p, i):
                    # "(|-" is "(" followed by a turnstile, not a receiver opener.
                    if p in ("(|", "[|", "{|") and source.startswith("-", i + 2):
                        p = p[0]
                    advance(len(p))
                    emit("punct", p, sl, sc)
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", SourceSpan(file, sl, sc, sl, sc))
    toks.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
    return toks
