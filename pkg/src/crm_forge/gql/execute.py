"""Execution: depth-first field resolution in document order.

Resolvers live in a table keyed by type then field name; a missing entry
falls back to attribute/key lookup with camelCase-to-snake_case mapping. A
resolver exception turns into a null field plus one path-bearing error; the
response is canonical (selection-ordered keys, compact JSON), so identical
inputs produce byte-identical bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Optional

from ..errors import ApiError
from .ast import (
    Document,
    EnumValue,
    Field,
    ListTypeRef,
    ListValue,
    NamedTypeRef,
    NullValue,
    ObjectValue,
    Operation,
    TypeRef,
    VariableRef,
)
from .lexer import LexError, tokenize
from .parser import ParseError, parse
from .schema import ArgDef, EnumType, InputObjectType, ObjectType, ScalarType, Schema
from .validate import TYPENAME_FIELD, validate


class OperationNotFound(Exception):
    pass


class VariableCoercionError(Exception):
    def __init__(self, name: str, reason: str):
        super().__init__(f"variable ${name}: {reason}")
        self.name = name
        self.reason = reason


class SubscriptionRequiresSocket(Exception):
    def __init__(self) -> None:
        super().__init__("subscriptions must be executed over the websocket transport")


class MultipleRootFields(Exception):
    pass


class UnknownSubscriptionField(Exception):
    pass


@dataclass
class GqlError:
    message: str
    locations: list[tuple[int, int]] = dc_field(default_factory=list)
    path: Optional[list] = None
    extensions: Optional[dict] = None

    def to_payload(self) -> dict:
        payload: dict[str, Any] = {"message": self.message}
        if self.locations:
            payload["locations"] = [{"line": l, "column": c} for l, c in self.locations]
        if self.path is not None:
            payload["path"] = self.path
        if self.extensions:
            payload["extensions"] = self.extensions
        return payload


@dataclass
class GqlResponse:
    data: Any = None
    errors: list[GqlError] = dc_field(default_factory=list)
    include_data: bool = True

    def to_payload(self) -> dict:
        payload: dict[str, Any] = {}
        if self.include_data:
            payload["data"] = self.data
        if self.errors:
            payload["errors"] = [e.to_payload() for e in self.errors]
        return payload

    def canonical_json(self) -> str:
        return json.dumps(self.to_payload(), ensure_ascii=False, separators=(",", ":"))


_SNAKE_RE = re.compile(r"(?<!^)(?=[A-Z])")


def snake_case(name: str) -> str:
    return _SNAKE_RE.sub("_", name).lower()


def default_resolver(field_name: str) -> Callable:
    attr = snake_case(field_name)

    def resolve(parent, args, ctx):
        if isinstance(parent, dict):
            if field_name in parent:
                return parent[field_name]
            return parent.get(attr)
        return getattr(parent, attr, None)

    return resolve


class _FieldError(Exception):
    """Internal signal: a field failed with a clean message/extensions."""

    def __init__(self, message: str, extensions: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.extensions = extensions


_ABSENT = object()


# ---------------------------------------------------------------------------
# Variable coercion


def coerce_variables(op: Operation, variables: dict, schema: Schema) -> dict:
    coerced: dict[str, Any] = {}
    provided = variables or {}
    for var in op.variable_defs:
        if var.name in provided:
            value = provided[var.name]
            if value is None:
                if var.type_ref.non_null:
                    raise VariableCoercionError(var.name, "null for non-null variable")
                coerced[var.name] = None
            else:
                try:
                    coerced[var.name] = _coerce_input(value, var.type_ref, schema)
                except ValueError as exc:
                    raise VariableCoercionError(var.name, str(exc)) from exc
        elif var.has_default:
            coerced[var.name] = _const_to_python(var.default, var.type_ref, schema)
        elif var.type_ref.non_null:
            raise VariableCoercionError(var.name, "required variable not supplied")
        # else: absent; arguments referencing it fall back to their defaults
    return coerced


def _coerce_input(value: Any, type_ref: TypeRef, schema: Schema) -> Any:
    if value is None:
        if type_ref.non_null:
            raise ValueError("null where a non-null value is required")
        return None
    if isinstance(type_ref, ListTypeRef):
        if not isinstance(value, list):
            raise ValueError(f"expected a list, got {value!r}")
        return [_coerce_input(item, type_ref.of_type, schema) for item in value]
    base = schema.type_for(type_ref.name)
    if isinstance(base, ScalarType):
        return base.coerce_input(value)
    if isinstance(base, EnumType):
        return base.coerce_input(value)
    if isinstance(base, InputObjectType):
        if not isinstance(value, dict):
            raise ValueError(f"expected an input object for {base.name}, got {value!r}")
        result: dict[str, Any] = {}
        for key in value:
            if key not in base.fields:
                raise ValueError(f"unknown field {key!r} on input object {base.name}")
        for name, spec in base.fields.items():
            if name in value:
                result[name] = _coerce_input(value[name], spec.type_ref, schema)
            elif spec.has_default:
                result[name] = spec.default
            elif spec.required:
                raise ValueError(f"required field {name!r} missing on input object {base.name}")
        return result
    raise ValueError(f"type {type_ref.base_name} cannot be used as an input")


def _const_to_python(node: Any, type_ref: TypeRef, schema: Schema) -> Any:
    """Convert a constant AST literal (variable defaults) to a python value."""
    if isinstance(node, NullValue):
        return None
    if isinstance(node, ListValue):
        inner = type_ref.of_type if isinstance(type_ref, ListTypeRef) else type_ref
        return [_const_to_python(item, inner, schema) for item in node.items]
    if isinstance(node, ObjectValue):
        base = schema.type_for(type_ref.base_name)
        result = {}
        for name, item in node.fields:
            spec = base.fields.get(name) if isinstance(base, InputObjectType) else None
            result[name] = _const_to_python(item, spec.type_ref if spec else type_ref, schema)
        return result
    if isinstance(node, EnumValue):
        return node.name
    value = node.value
    base = schema.type_for(type_ref.base_name)
    if isinstance(base, ScalarType):
        return base.coerce_input(value)
    return value


# ---------------------------------------------------------------------------
# Executor


class _Executor:
    def __init__(self, schema: Schema, resolvers: dict, context: Any, variables: dict):
        self.schema = schema
        self.resolvers = resolvers or {}
        self.context = context
        self.variables = variables
        self.errors: list[GqlError] = []

    def execute_selection_set(
        self, object_type: ObjectType, selections: tuple, parent: Any, path: list
    ) -> dict:
        result: dict[str, Any] = {}
        for node in selections:
            key = node.response_key
            field_path = path + [key]
            if node.name == TYPENAME_FIELD:
                result[key] = object_type.name
                continue
            fdef = object_type.fields.get(node.name)
            if fdef is None:
                self._error(f"unknown field {node.name!r} on type {object_type.name}", node, field_path)
                result[key] = None
                continue
            try:
                args = self._argument_values(fdef.args, node)
                resolver = self.resolvers.get(object_type.name, {}).get(
                    node.name, default_resolver(node.name)
                )
                raw = resolver(parent, args, self.context)
            except Exception as exc:
                self._capture(exc, node, field_path)
                result[key] = None
                continue
            result[key] = self.complete_value(fdef.type_ref, raw, node, field_path)
        return result

    def complete_value(self, type_ref: TypeRef, value: Any, node: Field, path: list) -> Any:
        if value is None:
            if type_ref.non_null:
                self._error(
                    f"field {node.response_key!r} returned null for non-null type "
                    f"{type_ref.render()}",
                    node,
                    path,
                )
            return None
        if isinstance(type_ref, ListTypeRef):
            if not isinstance(value, (list, tuple)):
                self._error(f"field {node.response_key!r} expected a list", node, path)
                return None
            return [
                self.complete_value(type_ref.of_type, item, node, path + [i])
                for i, item in enumerate(value)
            ]
        base = self.schema.type_for(type_ref.name)
        if isinstance(base, ScalarType):
            try:
                return base.serialize(value)
            except (ValueError, TypeError) as exc:
                self._error(f"cannot serialize {type_ref.name} value: {exc}", node, path)
                return None
        if isinstance(base, EnumType):
            try:
                return base.serialize(value)
            except ValueError as exc:
                self._error(str(exc), node, path)
                return None
        if isinstance(base, ObjectType):
            return self.execute_selection_set(base, node.selection_set or (), value, path)
        self._error(f"type {type_ref.base_name} cannot be produced in a response", node, path)
        return None

    def _argument_values(self, arg_defs: dict[str, ArgDef], node: Field) -> dict:
        values: dict[str, Any] = {}
        provided = {arg.name: arg.value for arg in node.arguments}
        for name, spec in arg_defs.items():
            if name in provided:
                value = self._literal_to_python(provided[name], spec.type_ref)
                if value is _ABSENT:
                    pass  # references a variable that was never supplied
                else:
                    values[name] = value
                    continue
            if spec.has_default:
                values[name] = spec.default
            elif spec.required:
                raise _FieldError(f"required argument {name!r} was not supplied")
        return values

    def _literal_to_python(self, value: Any, type_ref: TypeRef) -> Any:
        if isinstance(value, VariableRef):
            if value.name not in self.variables:
                return _ABSENT
            return self.variables[value.name]
        if isinstance(value, NullValue):
            return None
        if isinstance(value, ListValue):
            inner = type_ref.of_type if isinstance(type_ref, ListTypeRef) else type_ref
            items = [self._literal_to_python(item, inner) for item in value.items]
            return [None if item is _ABSENT else item for item in items]
        if isinstance(value, ObjectValue):
            base = self.schema.type_for(type_ref.base_name)
            result = {}
            if isinstance(base, InputObjectType):
                for name, item in value.fields:
                    spec = base.fields.get(name)
                    if spec is None:
                        continue  # validation already reported it
                    converted = self._literal_to_python(item, spec.type_ref)
                    if converted is not _ABSENT:
                        result[name] = converted
                for name, spec in base.fields.items():
                    if name not in result and spec.has_default:
                        result[name] = spec.default
            return result
        if isinstance(value, EnumValue):
            return value.name
        base = self.schema.type_for(type_ref.base_name)
        if isinstance(base, ScalarType):
            try:
                return base.coerce_input(value.value)
            except ValueError as exc:
                raise _FieldError(str(exc)) from exc
        return value.value

    def _capture(self, exc: Exception, node: Field, path: list) -> None:
        if isinstance(exc, _FieldError):
            self.errors.append(
                GqlError(exc.message, [(node.line, node.column)], path, exc.extensions)
            )
        elif isinstance(exc, ApiError):
            self.errors.append(
                GqlError(exc.message, [(node.line, node.column)], path, exc.extensions)
            )
        else:
            self.errors.append(GqlError(str(exc) or type(exc).__name__, [(node.line, node.column)], path))

    def _error(self, message: str, node: Field, path: list) -> None:
        self.errors.append(GqlError(message, [(node.line, node.column)], path))


def select_operation(doc: Document, operation_name: Optional[str]) -> Operation:
    if operation_name is not None:
        for op in doc.operations:
            if op.name == operation_name:
                return op
        raise OperationNotFound(f"operation {operation_name!r} not found in document")
    if len(doc.operations) == 1:
        return doc.operations[0]
    raise OperationNotFound("operationName is required for multi-operation documents")


def execute(
    doc: Document,
    schema: Schema,
    resolvers: dict,
    variables: Optional[dict] = None,
    operation_name: Optional[str] = None,
    context: Any = None,
    root_value: Any = None,
) -> GqlResponse:
    """Execute a validated query or mutation document.

    Raises OperationNotFound, VariableCoercionError, or
    SubscriptionRequiresSocket; field-level failures become response errors.
    """
    op = select_operation(doc, operation_name)
    if op.op_type == "subscription":
        raise SubscriptionRequiresSocket()
    root = schema.root_type(op.op_type)
    if root is None:
        raise OperationNotFound(f"schema does not support {op.op_type} operations")
    coerced = coerce_variables(op, variables or {}, schema)
    executor = _Executor(schema, resolvers, context, coerced)
    data = executor.execute_selection_set(root, op.selection_set, root_value, [])
    return GqlResponse(data=data, errors=executor.errors, include_data=True)


# ---------------------------------------------------------------------------
# Subscriptions


@dataclass
class SubscriptionPlan:
    topic: str
    key: str  # response key of the root field
    field_node: Field
    type_ref: TypeRef
    schema: Schema
    resolvers: dict
    variables: dict

    def project(self, event: Any, context: Any = None) -> dict:
        """Run the subscription's selection against one pushed event."""
        executor = _Executor(self.schema, self.resolvers, context, self.variables)
        value = executor.complete_value(self.type_ref, event, self.field_node, [self.key])
        payload: dict[str, Any] = {"data": {self.key: value}}
        if executor.errors:
            payload["errors"] = [e.to_payload() for e in executor.errors]
        return payload


def resolve_subscription(
    doc: Document,
    schema: Schema,
    topic_map: dict[str, str],
    resolvers: dict,
    variables: Optional[dict] = None,
    operation_name: Optional[str] = None,
) -> SubscriptionPlan:
    op = select_operation(doc, operation_name)
    if op.op_type != "subscription":
        raise UnknownSubscriptionField(f"{op.op_type} operations cannot be subscribed")
    if len(op.selection_set) != 1:
        raise MultipleRootFields("subscriptions must have exactly one root field")
    node = op.selection_set[0]
    root = schema.root_type("subscription")
    fdef = root.fields.get(node.name) if root else None
    if root is None or fdef is None or node.name not in topic_map:
        raise UnknownSubscriptionField(f"unknown subscription field {node.name!r}")
    coerced = coerce_variables(op, variables or {}, schema)
    return SubscriptionPlan(
        topic=topic_map[node.name],
        key=node.response_key,
        field_node=node,
        type_ref=fdef.type_ref,
        schema=schema,
        resolvers=resolvers,
        variables=coerced,
    )


# ---------------------------------------------------------------------------
# Full pipeline


def run(
    source: str,
    schema: Schema,
    resolvers: dict,
    variables: Optional[dict] = None,
    operation_name: Optional[str] = None,
    context: Any = None,
    root_value: Any = None,
    max_depth: Optional[int] = None,
) -> GqlResponse:
    """tokenize -> parse -> validate -> execute, never raising: every failure
    mode becomes a well-formed response. Parse and validation failures omit
    ``data`` entirely."""
    try:
        doc = parse(tokenize(source))
    except (LexError, ParseError) as exc:
        return GqlResponse(
            errors=[GqlError(exc.message, [(exc.line, exc.column)])], include_data=False
        )
    violations = validate(doc, schema, max_depth=max_depth)
    if violations:
        return GqlResponse(
            errors=[GqlError(v.message, [(v.line, v.column)]) for v in violations],
            include_data=False,
        )
    try:
        return execute(
            doc,
            schema,
            resolvers,
            variables=variables,
            operation_name=operation_name,
            context=context,
            root_value=root_value,
        )
    except (OperationNotFound, VariableCoercionError, SubscriptionRequiresSocket) as exc:
        return GqlResponse(errors=[GqlError(str(exc))], include_data=False)
