"""AST node types and the canonical printer.

Source positions ride on every node for error reporting but are excluded from
equality, so a parse -> print -> parse round trip compares equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class NamedTypeRef:
    name: str
    non_null: bool = False

    def render(self) -> str:
        return self.name + ("!" if self.non_null else "")

    @property
    def base_name(self) -> str:
        return self.name


@dataclass(frozen=True)
class ListTypeRef:
    of_type: "TypeRef"
    non_null: bool = False

    def render(self) -> str:
        return f"[{self.of_type.render()}]" + ("!" if self.non_null else "")

    @property
    def base_name(self) -> str:
        return self.of_type.base_name


TypeRef = Union[NamedTypeRef, ListTypeRef]


@dataclass(frozen=True)
class IntValue:
    value: int
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FloatValue:
    value: float
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class StringValue:
    value: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BooleanValue:
    value: bool
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class NullValue:
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class EnumValue:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class VariableRef:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ListValue:
    items: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ObjectValue:
    fields: tuple  # of (name, Value) pairs, in source order
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


Value = Union[
    IntValue, FloatValue, StringValue, BooleanValue, NullValue,
    EnumValue, VariableRef, ListValue, ObjectValue,
]


@dataclass(frozen=True)
class Argument:
    name: str
    value: Value
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Field:
    name: str
    alias: Optional[str] = None
    arguments: tuple = ()
    selection_set: Optional[tuple] = None  # tuple of Field, or None for leaves
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    @property
    def response_key(self) -> str:
        return self.alias or self.name


_MISSING = object()


@dataclass(frozen=True)
class VariableDef:
    name: str
    type_ref: TypeRef
    default: object = _MISSING  # a Value node when present
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    @property
    def has_default(self) -> bool:
        return self.default is not _MISSING

    @property
    def required(self) -> bool:
        return self.type_ref.non_null and not self.has_default


@dataclass(frozen=True)
class Operation:
    op_type: str  # "query" | "mutation" | "subscription"
    name: Optional[str]
    variable_defs: tuple
    selection_set: tuple
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Document:
    operations: tuple


# ---------------------------------------------------------------------------
# Canonical printer


def _escape_string(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def print_value(value: Value) -> str:
    if isinstance(value, IntValue):
        return str(value.value)
    if isinstance(value, FloatValue):
        return repr(value.value)
    if isinstance(value, StringValue):
        return f'"{_escape_string(value.value)}"'
    if isinstance(value, BooleanValue):
        return "true" if value.value else "false"
    if isinstance(value, NullValue):
        return "null"
    if isinstance(value, EnumValue):
        return value.name
    if isinstance(value, VariableRef):
        return f"${value.name}"
    if isinstance(value, ListValue):
        return "[" + ", ".join(print_value(v) for v in value.items) + "]"
    if isinstance(value, ObjectValue):
        return "{" + ", ".join(f"{k}: {print_value(v)}" for k, v in value.fields) + "}"
    raise TypeError(f"not a value node: {value!r}")


def _print_field(node: Field) -> str:
    parts = []
    if node.alias:
        parts.append(f"{node.alias}: {node.name}")
    else:
        parts.append(node.name)
    if node.arguments:
        args = ", ".join(f"{a.name}: {print_value(a.value)}" for a in node.arguments)
        parts.append(f"({args})")
    if node.selection_set is not None:
        parts.append(" " + _print_selection_set(node.selection_set))
    return "".join(parts)


def _print_selection_set(selections: tuple) -> str:
    return "{ " + " ".join(_print_field(f) for f in selections) + " }"


def print_operation(op: Operation) -> str:
    head = op.op_type
    if op.name:
        head += f" {op.name}"
    if op.variable_defs:
        defs = []
        for var in op.variable_defs:
            text = f"${var.name}: {var.type_ref.render()}"
            if var.has_default:
                text += f" = {print_value(var.default)}"
            defs.append(text)
        head += "(" + ", ".join(defs) + ")"
    body = _print_selection_set(op.selection_set)
    if head == "query":
        return body  # anonymous shorthand
    return f"{head} {body}"


def print_document(doc: Document) -> str:
    return "\n\n".join(print_operation(op) for op in doc.operations)
