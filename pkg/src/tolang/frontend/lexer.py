"""Tokenizer for ToLang source text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import LexError

KEYWORDS = {"tol": "KW_tol", "space": "KW_space", "list": "KW_list"}

# longest first
SYMBOLS = [
    (":=", "Define"), ("==", "EqEq"), ("!=", "Ne"), ("<=", "Le"), (">=", "Ge"),
    ("||", "DBar"), ("...", "Ellipsis"), ("…", "Ellipsis"),
    ("=", "Eq"), ("<", "Lt"), (">", "Gt"), ("|", "Bar"), ("[", "LBrack"), ("]", "RBrack"),
    ("(", "LParen"), (")", "RParen"), (",", "Comma"), (":", "Colon"), (";", "Semi"),
    (".", "Dot"), ("*", "Star"), ("+", "Plus"), ("-", "Minus"), ("/", "Slash"),
    ("%", "Percent"), ("^", "Caret"),
]

_NUMBER = re.compile(r"(\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?|\d+)")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

# a quote right after one of these is the prime operator, otherwise a character literal
_PRIME_AFTER = {"RBrack", "Bar", "DBar", "RParen", "Ident"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    value: object = field(default=None, compare=False)

    @property
    def length(self) -> int:
        return len(self.text)

    def __repr__(self) -> str:
        if self.kind in ("Ident", "Int", "Float", "Char"):
            return f"{self.kind}({self.text})"
        return self.kind


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens. Newlines outside brackets end statements."""
    toks: list[Token] = []
    depth = 0
    i, line, col = 0, 1, 1
    n = len(source)

    def emit(kind: str, text: str, value: object = None) -> None:
        toks.append(Token(kind, text, line, col, value))

    while i < n:
        ch = source[i]
        if ch == "\n":
            if depth == 0 and toks and toks[-1].kind not in ("Newline",):
                emit("Newline", "\n")
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == "'":
            prev = toks[-1] if toks else None
            adjacent = prev is not None and prev.line == line and prev.col + prev.length == col
            if prev is not None and prev.kind in _PRIME_AFTER and adjacent:
                emit("Prime", "'")
                i, col = i + 1, col + 1
                continue
            if i + 2 < n and source[i + 2] == "'" and source[i + 1] != "\n":
                emit("Char", source[i:i + 3], source[i + 1])
                i, col = i + 3, col + 3
                continue
            raise LexError("unterminated character literal", line, col, 1)
        m = _NUMBER.match(source, i)
        if m and (ch.isdigit() or (ch == "." and m)):
            text = m.group(0)
            # "1." directly followed by a letter is a chain, not a float
            if text.endswith(".") and i + len(text) < n and source[i + len(text)].isalpha():
                text = text[:-1]
            if re.fullmatch(r"\d+", text):
                emit("Int", text, int(text))
            else:
                emit("Float", text, float(text))
            i, col = i + len(text), col + len(text)
            continue
        m = _IDENT.match(source, i)
        if m:
            text = m.group(0)
            emit(KEYWORDS.get(text, "Ident"), text)
            i, col = i + len(text), col + len(text)
            continue
        for sym, kind in SYMBOLS:
            if source.startswith(sym, i):
                if kind in ("LBrack", "LParen"):
                    depth += 1
                elif kind in ("RBrack", "RParen"):
                    depth = max(0, depth - 1)
                emit(kind, sym)
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", line, col, 1)
    if toks and toks[-1].kind == "Newline":
        toks.pop()
    toks.append(Token("EOF", "", line, col))
    return toks
