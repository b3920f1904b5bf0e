"""Recursive-descent parser from the token stream to a Document AST.

Supports named/anonymous operations, variable definitions (with non-null,
list types, and defaults), field arguments over the full literal grammar,
aliases, and nested selection sets. Fragments and directives are outside the
subset and fail with a dedicated message.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    Argument,
    BooleanValue,
    Document,
    EnumValue,
    Field,
    FloatValue,
    IntValue,
    ListTypeRef,
    ListValue,
    NamedTypeRef,
    NullValue,
    ObjectValue,
    Operation,
    StringValue,
    TypeRef,
    VariableDef,
    VariableRef,
    _MISSING,
)
from .lexer import LexError, Token, TokenKind, tokenize

OP_TYPES = ("query", "mutation", "subscription")


class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.current
        if token.kind != TokenKind.EOF:
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None):
        token = token or self.current
        raise ParseError(token.line, token.column, message)

    def at_punct(self, text: str) -> bool:
        return self.current.kind == TokenKind.PUNCT and self.current.text == text

    def expect_punct(self, text: str) -> Token:
        if not self.at_punct(text):
            self.error(f"expected {text!r}, found {self.current.describe()}")
        return self.advance()

    def expect_name(self, what: str = "a name") -> Token:
        if self.current.kind != TokenKind.NAME:
            self.error(f"expected {what}, found {self.current.describe()}")
        return self.advance()

    def reject_unsupported(self) -> None:
        if self.at_punct("..."):
            self.error("fragments are unsupported in this GraphQL subset")
        if self.at_punct("@"):
            self.error("directives are unsupported in this GraphQL subset")

    # --- grammar -----------------------------------------------------

    def document(self) -> Document:
        operations = []
        while self.current.kind != TokenKind.EOF:
            operations.append(self.operation())
        if not operations:
            self.error("document must contain at least one operation")
        return Document(operations=tuple(operations))

    def operation(self) -> Operation:
        token = self.current
        if self.at_punct("{"):
            return Operation(
                op_type="query",
                name=None,
                variable_defs=(),
                selection_set=self.selection_set(),
                line=token.line,
                column=token.column,
            )
        if token.kind == TokenKind.NAME and token.text == "fragment":
            self.error("fragments are unsupported in this GraphQL subset")
        if token.kind != TokenKind.NAME or token.text not in OP_TYPES:
            self.error(
                f"expected an operation (query, mutation, subscription or '{{'), "
                f"found {token.describe()}"
            )
        self.advance()
        name = None
        if self.current.kind == TokenKind.NAME:
            name = self.advance().text
        variable_defs = ()
        if self.at_punct("("):
            variable_defs = self.variable_defs()
        self.reject_unsupported()
        return Operation(
            op_type=token.text,
            name=name,
            variable_defs=variable_defs,
            selection_set=self.selection_set(),
            line=token.line,
            column=token.column,
        )

    def variable_defs(self) -> tuple:
        self.expect_punct("(")
        defs = []
        while not self.at_punct(")"):
            dollar = self.expect_punct("$")
            name = self.expect_name("a variable name")
            self.expect_punct(":")
            type_ref = self.type_ref()
            default = _MISSING
            if self.at_punct("="):
                self.advance()
                default = self.value(const=True)
            defs.append(
                VariableDef(
                    name=name.text,
                    type_ref=type_ref,
                    default=default,
                    line=dollar.line,
                    column=dollar.column,
                )
            )
        self.expect_punct(")")
        if not defs:
            self.error("variable definitions cannot be empty")
        return tuple(defs)

    def type_ref(self) -> TypeRef:
        if self.at_punct("["):
            self.advance()
            inner = self.type_ref()
            self.expect_punct("]")
            non_null = False
            if self.at_punct("!"):
                self.advance()
                non_null = True
            return ListTypeRef(of_type=inner, non_null=non_null)
        name = self.expect_name("a type name")
        non_null = False
        if self.at_punct("!"):
            self.advance()
            non_null = True
        return NamedTypeRef(name=name.text, non_null=non_null)

    def selection_set(self) -> tuple:
        self.reject_unsupported()
        self.expect_punct("{")
        fields = []
        while not self.at_punct("}"):
            self.reject_unsupported()
            fields.append(self.field())
        if not fields:
            self.error("selection set cannot be empty")
        self.expect_punct("}")
        return tuple(fields)

    def field(self) -> Field:
        first = self.expect_name("a field name")
        alias = None
        name = first.text
        if self.at_punct(":"):
            self.advance()
            alias = first.text
            name = self.expect_name("a field name after the alias").text
        arguments = ()
        if self.at_punct("("):
            arguments = self.arguments()
        self.reject_unsupported()
        selection = None
        if self.at_punct("{"):
            selection = self.selection_set()
        return Field(
            name=name,
            alias=alias,
            arguments=arguments,
            selection_set=selection,
            line=first.line,
            column=first.column,
        )

    def arguments(self) -> tuple:
        self.expect_punct("(")
        args = []
        while not self.at_punct(")"):
            name = self.expect_name("an argument name")
            self.expect_punct(":")
            args.append(
                Argument(
                    name=name.text,
                    value=self.value(),
                    line=name.line,
                    column=name.column,
                )
            )
        if not args:
            self.error("argument list cannot be empty")
        self.expect_punct(")")
        return tuple(args)

    def value(self, const: bool = False):
        token = self.current
        if self.at_punct("$"):
            if const:
                self.error("variables are not allowed in default values")
            self.advance()
            name = self.expect_name("a variable name")
            return VariableRef(name=name.text, line=token.line, column=token.column)
        if token.kind == TokenKind.INT:
            self.advance()
            return IntValue(value=int(token.text), line=token.line, column=token.column)
        if token.kind == TokenKind.FLOAT:
            self.advance()
            return FloatValue(value=float(token.text), line=token.line, column=token.column)
        if token.kind == TokenKind.STRING:
            self.advance()
            return StringValue(value=token.text, line=token.line, column=token.column)
        if token.kind == TokenKind.NAME:
            self.advance()
            if token.text == "true":
                return BooleanValue(value=True, line=token.line, column=token.column)
            if token.text == "false":
                return BooleanValue(value=False, line=token.line, column=token.column)
            if token.text == "null":
                return NullValue(line=token.line, column=token.column)
            return EnumValue(name=token.text, line=token.line, column=token.column)
        if self.at_punct("["):
            self.advance()
            items = []
            while not self.at_punct("]"):
                items.append(self.value(const=const))
            self.expect_punct("]")
            return ListValue(items=tuple(items), line=token.line, column=token.column)
        if self.at_punct("{"):
            self.advance()
            fields = []
            while not self.at_punct("}"):
                name = self.expect_name("an input object field name")
                self.expect_punct(":")
                fields.append((name.text, self.value(const=const)))
            self.expect_punct("}")
            return ObjectValue(fields=tuple(fields), line=token.line, column=token.column)
        self.error(f"expected a value, found {token.describe()}")


def parse(tokens: list[Token]) -> Document:
    return _Parser(tokens).document()


def parse_source(source: str) -> Document:
    """Tokenize and parse in one step; raises LexError or ParseError."""
    return parse(tokenize(source))
