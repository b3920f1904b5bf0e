"""Programmatic schema definition: object/enum/scalar/input types plus the
root operation types, with structural checks and an SDL renderer.

Scalars own their wire behavior: ``serialize`` shapes resolver output for the
response and ``coerce_input`` admits variable/literal values. Both raise
ValueError on bad input.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any, Callable, Optional

from .ast import ListTypeRef, NamedTypeRef, TypeRef

_MISSING = object()


class SchemaError(Exception):
    pass


def ref(name: str, non_null: bool = False) -> NamedTypeRef:
    return NamedTypeRef(name=name, non_null=non_null)


def list_of(inner: TypeRef, non_null: bool = False) -> ListTypeRef:
    return ListTypeRef(of_type=inner, non_null=non_null)


def _identity(value: Any) -> Any:
    return value


@dataclass
class ScalarType:
    name: str
    serialize: Callable[[Any], Any] = _identity
    coerce_input: Callable[[Any], Any] = _identity
    literal_kinds: Optional[tuple] = None  # accepted AST value classes, None = any
    description: Optional[str] = None


@dataclass
class EnumType:
    name: str
    values: tuple
    description: Optional[str] = None

    def serialize(self, value: Any) -> str:
        text = value.value if isinstance(value, Enum) else value
        if text not in self.values:
            raise ValueError(f"{text!r} is not a member of enum {self.name}")
        return text

    def coerce_input(self, value: Any) -> str:
        if not isinstance(value, str) or value not in self.values:
            raise ValueError(f"expected a member of enum {self.name}, got {value!r}")
        return value


@dataclass
class ArgDef:
    type_ref: TypeRef
    default: Any = _MISSING
    description: Optional[str] = None

    @property
    def has_default(self) -> bool:
        return self.default is not _MISSING

    @property
    def required(self) -> bool:
        return self.type_ref.non_null and not self.has_default


@dataclass
class FieldDef:
    type_ref: TypeRef
    args: dict[str, ArgDef] = dc_field(default_factory=dict)
    description: Optional[str] = None


@dataclass
class ObjectType:
    name: str
    fields: dict[str, FieldDef]
    description: Optional[str] = None


@dataclass
class InputObjectType:
    name: str
    fields: dict[str, ArgDef]
    description: Optional[str] = None


TypeDef = ScalarType | EnumType | ObjectType | InputObjectType

INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1


def _coerce_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"expected an Int, got {value!r}")
    if not INT32_MIN <= value <= INT32_MAX:
        raise ValueError(f"Int out of 32-bit range: {value}")
    return value


def _coerce_float(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"expected a Float, got {value!r}")
    return float(value)


def _coerce_string(value: Any) -> str:
    if not isinstance(value, str):
        raise ValueError(f"expected a String, got {value!r}")
    return value


def _coerce_boolean(value: Any) -> bool:
    if not isinstance(value, bool):
        raise ValueError(f"expected a Boolean, got {value!r}")
    return value


def _coerce_id(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ValueError(f"expected an ID, got {value!r}")
    return str(value)


def _serialize_float(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"cannot serialize {value!r} as Float")
    return float(value)


def builtin_scalars() -> list[ScalarType]:
    from .ast import BooleanValue, FloatValue, IntValue, StringValue

    return [
        ScalarType("Int", serialize=_coerce_int, coerce_input=_coerce_int,
                   literal_kinds=(IntValue,)),
        ScalarType("Float", serialize=_serialize_float, coerce_input=_coerce_float,
                   literal_kinds=(IntValue, FloatValue)),
        ScalarType("String", serialize=_coerce_string, coerce_input=_coerce_string,
                   literal_kinds=(StringValue,)),
        ScalarType("Boolean", serialize=_coerce_boolean, coerce_input=_coerce_boolean,
                   literal_kinds=(BooleanValue,)),
        ScalarType("ID", serialize=_coerce_id, coerce_input=_coerce_id,
                   literal_kinds=(StringValue, IntValue)),
    ]


class Schema:
    def __init__(
        self,
        types: list[TypeDef],
        query_type: str,
        mutation_type: Optional[str] = None,
        subscription_type: Optional[str] = None,
    ):
        self.types: dict[str, TypeDef] = {}
        for t in types:
            if t.name in self.types:
                raise SchemaError(f"duplicate type name {t.name}")
            self.types[t.name] = t
        self.query_type = query_type
        self.mutation_type = mutation_type
        self.subscription_type = subscription_type
        self._check()

    def type_for(self, name: str) -> Optional[TypeDef]:
        return self.types.get(name)

    def root_type(self, op_type: str) -> Optional[ObjectType]:
        name = {
            "query": self.query_type,
            "mutation": self.mutation_type,
            "subscription": self.subscription_type,
        }.get(op_type)
        if name is None:
            return None
        t = self.types.get(name)
        return t if isinstance(t, ObjectType) else None

    def is_composite(self, type_ref: TypeRef) -> bool:
        return isinstance(self.types.get(type_ref.base_name), ObjectType)

    def is_input_type(self, type_ref: TypeRef) -> bool:
        return isinstance(
            self.types.get(type_ref.base_name), (ScalarType, EnumType, InputObjectType)
        )

    # --- structural checks ----------------------------------------------

    def _check(self) -> None:
        for op, name in (
            ("query", self.query_type),
            ("mutation", self.mutation_type),
            ("subscription", self.subscription_type),
        ):
            if name is not None and not isinstance(self.types.get(name), ObjectType):
                raise SchemaError(f"{op} root type {name!r} is not an object type")

        for t in self.types.values():
            if isinstance(t, ObjectType):
                for fname, fdef in t.fields.items():
                    self._check_ref(f"{t.name}.{fname}", fdef.type_ref)
                    for aname, arg in fdef.args.items():
                        self._check_ref(f"{t.name}.{fname}({aname})", arg.type_ref, input_only=True)
            elif isinstance(t, InputObjectType):
                for fname, arg in t.fields.items():
                    self._check_ref(f"{t.name}.{fname}", arg.type_ref, input_only=True)
        self._check_non_null_cycles()

    def _check_ref(self, where: str, type_ref: TypeRef, input_only: bool = False) -> None:
        base = self.types.get(type_ref.base_name)
        if base is None:
            raise SchemaError(f"{where} references unknown type {type_ref.base_name!r}")
        if input_only and isinstance(base, ObjectType):
            raise SchemaError(f"{where} must be an input type, got object {base.name}")

    def _check_non_null_cycles(self) -> None:
        # A cycle reachable purely through non-null named fields can never be
        # materialized; lists break the expansion so they do not count.
        edges: dict[str, set[str]] = {}
        for t in self.types.values():
            if isinstance(t, ObjectType):
                refs = [f.type_ref for f in t.fields.values()]
            elif isinstance(t, InputObjectType):
                refs = [f.type_ref for f in t.fields.values()]
            else:
                continue
            for type_ref in refs:
                if isinstance(type_ref, NamedTypeRef) and type_ref.non_null:
                    edges.setdefault(t.name, set()).add(type_ref.name)

        state: dict[str, int] = {}  # 1 = visiting, 2 = done

        def visit(name: str, path: list[str]) -> None:
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cycle = " -> ".join(path[path.index(name):] + [name])
                raise SchemaError(f"non-null field cycle: {cycle}")
            state[name] = 1
            for nxt in edges.get(name, ()):
                visit(nxt, path + [name])
            state[name] = 2

        for name in list(edges):
            visit(name, [])


# ---------------------------------------------------------------------------
# SDL rendering


def _render_default(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, str):
        return f'"{value}"'
    return str(value)


def _render_args(args: dict[str, ArgDef]) -> str:
    if not args:
        return ""
    parts = []
    for name, arg in args.items():
        text = f"{name}: {arg.type_ref.render()}"
        if arg.has_default:
            text += f" = {_render_default(arg.default)}"
        parts.append(text)
    return "(" + ", ".join(parts) + ")"


def render_sdl(schema: Schema) -> str:
    """Deterministic SDL for the served schema document."""
    blocks: list[str] = []
    for t in schema.types.values():
        if isinstance(t, ScalarType):
            if t.description:
                blocks.append(f'"""{t.description}"""\nscalar {t.name}')
            else:
                blocks.append(f"scalar {t.name}")
        elif isinstance(t, EnumType):
            values = "\n".join(f"  {v}" for v in t.values)
            blocks.append(f"enum {t.name} {{\n{values}\n}}")
        elif isinstance(t, ObjectType):
            lines = [
                f"  {name}{_render_args(fdef.args)}: {fdef.type_ref.render()}"
                for name, fdef in t.fields.items()
            ]
            blocks.append(f"type {t.name} {{\n" + "\n".join(lines) + "\n}")
        elif isinstance(t, InputObjectType):
            lines = []
            for name, arg in t.fields.items():
                text = f"  {name}: {arg.type_ref.render()}"
                if arg.has_default:
                    text += f" = {_render_default(arg.default)}"
                lines.append(text)
            blocks.append(f"input {t.name} {{\n" + "\n".join(lines) + "\n}")
    roots = [f"  query: {schema.query_type}"]
    if schema.mutation_type:
        roots.append(f"  mutation: {schema.mutation_type}")
    if schema.subscription_type:
        roots.append(f"  subscription: {schema.subscription_type}")
    blocks.append("schema {\n" + "\n".join(roots) + "\n}")
    return "\n\n".join(blocks) + "\n"
