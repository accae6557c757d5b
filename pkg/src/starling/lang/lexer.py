"""Tokenizer for STAR domain files.

`%` starts a comment running to end of line; whitespace is insignificant
between tokens. There are no keywords at the lexical level: words like
`implies` or `always` are plain NAME tokens the parser interprets in context.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(Enum):
    NAME = "name"
    INT = "int"
    COLONCOLON = "::"
    QQ = "??"
    GTGT = ">>"
    MINUS = "-"
    COMMA = ","
    SEMI = ";"
    DOT = "."
    LPAREN = "("
    RPAREN = ")"
    LBRACK = "["
    RBRACK = "]"
    ERROR = "error"
    EOF = "eof"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based
    col: int  # 1-based


_PUNCT = {
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "[": TokenKind.LBRACK,
    "]": TokenKind.RBRACK,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMI,
    ".": TokenKind.DOT,
    "-": TokenKind.MINUS,
}


def tokenize(text: str) -> list[Token]:
    """Scan the whole input; malformed characters become ERROR tokens."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(TokenKind.NAME, text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(TokenKind.INT, text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in ("::", "??", ">>"):
            kind = {
                "::": TokenKind.COLONCOLON,
                "??": TokenKind.QQ,
                ">>": TokenKind.GTGT,
            }[two]
            tokens.append(Token(kind, two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start_line, start_col))
            i += 1
            col += 1
            continue
        tokens.append(Token(TokenKind.ERROR, ch, start_line, start_col))
        i += 1
        col += 1
    tokens.append(Token(TokenKind.EOF, "", line, col))
    return tokens
