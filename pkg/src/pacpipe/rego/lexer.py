"""Tokenizer for the Rego subset.

Newlines are significant (they separate body expressions), so the lexer
emits NEWLINE tokens instead of swallowing them. ``#`` comments run to end
of line. Identifiers are reported as IDENT; keywords are recognized
contextually by the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import Diagnostic, Pos
from ..errors import PolicyParseError

# token kinds
IDENT = "IDENT"
NUMBER = "NUMBER"
STRING = "STRING"
PUNCT = "PUNCT"
NEWLINE = "NEWLINE"
EOF = "EOF"

_PUNCTS = (":=", "==", "!=", "<=", ">=", "<", ">", "=", "{", "}", "[", "]",
           "(", ")", ",", ".", ";")

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"-?[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?")

_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "n": "\n", "t": "\t",
            "r": "\r", "b": "\b", "f": "\f"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: Pos
    number: float = 0.0  # parsed value for NUMBER tokens


def _error(line: int, col: int, message: str) -> PolicyParseError:
    return PolicyParseError([Diagnostic(line, col, message)])


def tokenize(source: str) -> list[Token]:
    """Tokenize ``source``; raises PolicyParseError on lexical errors."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            # collapse runs of newlines into one token
            if not tokens or tokens[-1].kind != NEWLINE:
                tokens.append(Token(NEWLINE, "\n", Pos(line, col)))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        if ch == '"':
            value, consumed = _lex_string(source, i, line, col)
            tokens.append(Token(STRING, value, Pos(line, col)))
            i += consumed
            col += consumed
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            text = m.group(0)
            num = float(text) if ("." in text or "e" in text or "E" in text) else int(text)
            tokens.append(Token(NUMBER, text, Pos(line, col), number=num))
            i += len(text)
            col += len(text)
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group(0)
            tokens.append(Token(IDENT, text, Pos(line, col)))
            i += len(text)
            col += len(text)
            continue
        for p in _PUNCTS:
            if source.startswith(p, i):
                tokens.append(Token(PUNCT, p, Pos(line, col)))
                i += len(p)
                col += len(p)
                break
        else:
            raise _error(line, col, f"unexpected character {ch!r}")
    end_line = line
    end_col = col
    tokens.append(Token(EOF, "", Pos(end_line, max(1, end_col - 1) if col > 1 else 1)))
    return tokens


def _lex_string(source: str, start: int, line: int, col: int) -> tuple[str, int]:
    """Lex a double-quoted string starting at ``start``; returns (value, length)."""
    out: list[str] = []
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == '"':
            return "".join(out), i - start + 1
        if ch == "\n":
            break
        if ch == "\\":
            if i + 1 >= n:
                break
            esc = source[i + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 2
                continue
            if esc == "u" and i + 5 < n:
                hexpart = source[i + 2 : i + 6]
                try:
                    out.append(chr(int(hexpart, 16)))
                except ValueError:
                    raise _error(line, col + (i - start), "invalid \\u escape")
                i += 6
                continue
            raise _error(line, col + (i - start), f"invalid escape \\{esc}")
        out.append(ch)
        i += 1
    raise _error(line, col, "unterminated string literal")
