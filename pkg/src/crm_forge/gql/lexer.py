"""GraphQL lexer for the supported subset.

Whitespace, commas, and ``#`` line comments are insignificant. Strings are
double-quoted and single-line with ``\\\"``, ``\\\\``, and ``\\n`` escapes.
``...`` and ``@`` are tokenized so the parser can reject fragments and
directives with a clear message instead of a stray-character error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    NAME = "NAME"
    INT = "INT"
    FLOAT = "FLOAT"
    STRING = "STRING"
    PUNCT = "PUNCT"
    EOF = "EOF"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int  # 1-based
    column: int  # 1-based

    def describe(self) -> str:
        if self.kind == TokenKind.EOF:
            return "end of input"
        if self.kind == TokenKind.STRING:
            return f'string "{self.text}"'
        return f"{self.kind.value.lower()} '{self.text}'"


class LexError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_PUNCT_CHARS = set("{}():!$=[]@")
_NAME_START = set("_abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_NAME_CONT = _NAME_START | set("0123456789")
_DIGITS = set("0123456789")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n"}


class _Scanner:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.source[i] if i < len(self.source) else ""

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def error(self, message: str, line: int | None = None, column: int | None = None):
        raise LexError(line or self.line, column or self.column, message)


def tokenize(source: str) -> list[Token]:
    """Produce the token stream for ``source``, ending with an EOF token."""
    scanner = _Scanner(source)
    tokens: list[Token] = []
    while True:
        ch = scanner.peek()
        if ch == "":
            tokens.append(Token(TokenKind.EOF, "", scanner.line, scanner.column))
            return tokens
        if ch in " \t\r\n,":
            scanner.advance()
            continue
        if ch == "#":
            while scanner.peek() not in ("", "\n"):
                scanner.advance()
            continue
        line, column = scanner.line, scanner.column
        if ch in _PUNCT_CHARS:
            scanner.advance()
            tokens.append(Token(TokenKind.PUNCT, ch, line, column))
            continue
        if ch == ".":
            if scanner.peek(1) == "." and scanner.peek(2) == ".":
                for _ in range(3):
                    scanner.advance()
                tokens.append(Token(TokenKind.PUNCT, "...", line, column))
                continue
            scanner.error(f"illegal character {ch!r}")
        if ch in _NAME_START:
            text = ""
            while scanner.peek() in _NAME_CONT:
                text += scanner.advance()
            tokens.append(Token(TokenKind.NAME, text, line, column))
            continue
        if ch in _DIGITS or ch == "-":
            tokens.append(_read_number(scanner, line, column))
            continue
        if ch == '"':
            tokens.append(_read_string(scanner, line, column))
            continue
        scanner.error(f"illegal character {ch!r}")


def _read_number(scanner: _Scanner, line: int, column: int) -> Token:
    text = ""
    if scanner.peek() == "-":
        text += scanner.advance()
    if scanner.peek() not in _DIGITS:
        scanner.error("expected a digit after '-'")
    if scanner.peek() == "0":
        text += scanner.advance()
        if scanner.peek() in _DIGITS:
            scanner.error("numbers may not have leading zeros")
    else:
        while scanner.peek() in _DIGITS:
            text += scanner.advance()
    is_float = False
    if scanner.peek() == ".":
        is_float = True
        text += scanner.advance()
        if scanner.peek() not in _DIGITS:
            scanner.error("expected a digit after the decimal point")
        while scanner.peek() in _DIGITS:
            text += scanner.advance()
    if scanner.peek() in ("e", "E"):
        is_float = True
        text += scanner.advance()
        if scanner.peek() in ("+", "-"):
            text += scanner.advance()
        if scanner.peek() not in _DIGITS:
            scanner.error("expected a digit in the exponent")
        while scanner.peek() in _DIGITS:
            text += scanner.advance()
    if scanner.peek() in _NAME_START:
        scanner.error(f"number followed by name character {scanner.peek()!r}")
    kind = TokenKind.FLOAT if is_float else TokenKind.INT
    return Token(kind, text, line, column)


def _read_string(scanner: _Scanner, line: int, column: int) -> Token:
    scanner.advance()  # opening quote
    text = ""
    while True:
        ch = scanner.peek()
        if ch == "" or ch == "\n":
            scanner.error("unterminated string", line, column)
        if ch == '"':
            scanner.advance()
            return Token(TokenKind.STRING, text, line, column)
        if ch == "\\":
            scanner.advance()
            escape = scanner.peek()
            if escape not in _ESCAPES:
                scanner.error(f"unsupported escape sequence \\{escape}")
            text += _ESCAPES[escape]
            scanner.advance()
            continue
        text += scanner.advance()
