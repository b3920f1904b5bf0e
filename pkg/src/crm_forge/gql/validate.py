"""Schema-directed validation of parsed documents.

Violations are data, not exceptions; each carries the source position of the
offending node. A document that validates cleanly can be executed without
hitting unknown-field or unknown-argument conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
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
    VariableRef,
)
from .schema import ArgDef, EnumType, InputObjectType, ObjectType, ScalarType, Schema

TYPENAME_FIELD = "__typename"


@dataclass(frozen=True)
class GqlViolation:
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


def document_depth(doc: Document) -> int:
    """Nesting depth of the deepest selection set in any operation."""

    def depth_of(selections: tuple) -> int:
        deepest = 1
        for field in selections:
            if field.selection_set is not None:
                deepest = max(deepest, 1 + depth_of(field.selection_set))
        return deepest

    return max(depth_of(op.selection_set) for op in doc.operations)


class _Validator:
    def __init__(self, schema: Schema, max_depth: int | None):
        self.schema = schema
        self.max_depth = max_depth
        self.violations: list[GqlViolation] = []

    def report(self, node, message: str) -> None:
        self.violations.append(GqlViolation(message, node.line, node.column))

    def validate(self, doc: Document) -> list[GqlViolation]:
        if len(doc.operations) > 1:
            for op in doc.operations:
                if op.name is None:
                    self.report(op, "an anonymous operation must be the only operation")
            named = [op.name for op in doc.operations if op.name]
            for name in sorted({n for n in named if named.count(n) > 1}):
                dup = next(op for op in doc.operations if op.name == name)
                self.report(dup, f"duplicate operation name {name!r}")
        for op in doc.operations:
            self.operation(op)
        if self.max_depth is not None:
            depth = document_depth(doc)
            if depth > self.max_depth:
                self.report(
                    doc.operations[0],
                    f"document depth {depth} exceeds the configured maximum {self.max_depth}",
                )
        return self.violations

    def operation(self, op: Operation) -> None:
        declared: dict[str, TypeRef] = {}
        for var in op.variable_defs:
            if var.name in declared:
                self.report(var, f"duplicate variable ${var.name}")
            declared[var.name] = var.type_ref
            base = self.schema.type_for(var.type_ref.base_name)
            if base is None:
                self.report(var, f"variable ${var.name} has unknown type {var.type_ref.render()}")
            elif not self.schema.is_input_type(var.type_ref):
                self.report(
                    var, f"variable ${var.name} must have an input type, got {base.name}"
                )
            if var.has_default:
                self.literal_value(var.default, var.type_ref, declared={}, where=f"default of ${var.name}")
        root = self.schema.root_type(op.op_type)
        if root is None:
            self.report(op, f"schema does not support {op.op_type} operations")
            return
        self.selection_set(op.selection_set, root, declared)

    def selection_set(self, selections: tuple, parent: ObjectType, declared: dict) -> None:
        for field in selections:
            self.field(field, parent, declared)

    def field(self, field: Field, parent: ObjectType, declared: dict) -> None:
        if field.name == TYPENAME_FIELD:
            if field.selection_set is not None:
                self.report(field, "__typename takes no selection set")
            if field.arguments:
                self.report(field, "__typename takes no arguments")
            return
        fdef = parent.fields.get(field.name)
        if fdef is None:
            self.report(field, f"unknown field {field.name!r} on type {parent.name}")
            return
        field_type = self.schema.type_for(fdef.type_ref.base_name)
        composite = isinstance(field_type, ObjectType)
        if composite and field.selection_set is None:
            self.report(
                field,
                f"field {field.name!r} of composite type {field_type.name} needs a selection set",
            )
        if not composite and field.selection_set is not None:
            self.report(
                field, f"field {field.name!r} of leaf type {fdef.type_ref.base_name} takes no selection set"
            )
        self.arguments(field, fdef.args, declared)
        if composite and field.selection_set is not None:
            self.selection_set(field.selection_set, field_type, declared)

    def arguments(self, field: Field, arg_defs: dict[str, ArgDef], declared: dict) -> None:
        seen = set()
        for arg in field.arguments:
            if arg.name in seen:
                self.report(arg, f"duplicate argument {arg.name!r}")
            seen.add(arg.name)
            spec = arg_defs.get(arg.name)
            if spec is None:
                self.report(
                    arg, f"unknown argument {arg.name!r} on field {field.name!r}"
                )
                continue
            self.literal_value(arg.value, spec.type_ref, declared, where=f"argument {arg.name!r}")
        for name, spec in arg_defs.items():
            if spec.required and name not in seen:
                self.report(
                    field, f"required argument {name!r} missing on field {field.name!r}"
                )

    # --- value / type compatibility -----------------------------------

    def literal_value(self, value, expected: TypeRef, declared: dict, where: str) -> None:
        if isinstance(value, VariableRef):
            var_type = declared.get(value.name)
            if var_type is None:
                self.report(value, f"undeclared variable ${value.name} used in {where}")
                return
            if var_type.base_name != expected.base_name:
                self.report(
                    value,
                    f"variable ${value.name} of type {var_type.render()} cannot be used "
                    f"as {expected.render()} in {where}",
                )
            elif expected.non_null and not var_type.non_null:
                self.report(
                    value,
                    f"nullable variable ${value.name} cannot be used for non-null {where}",
                )
            return
        if isinstance(value, NullValue):
            if expected.non_null:
                self.report(value, f"null is not allowed for non-null {where}")
            return
        if isinstance(expected, ListTypeRef):
            if not isinstance(value, ListValue):
                self.report(value, f"{where} expects a list of {expected.of_type.render()}")
                return
            for item in value.items:
                self.literal_value(item, expected.of_type, declared, where)
            return
        base = self.schema.type_for(expected.base_name)
        if isinstance(base, ScalarType):
            self.scalar_literal(value, base, where)
        elif isinstance(base, EnumType):
            if not isinstance(value, EnumValue):
                self.report(value, f"{where} expects a member of enum {base.name}")
            elif value.name not in base.values:
                self.report(
                    value, f"{value.name!r} is not a member of enum {base.name}"
                )
        elif isinstance(base, InputObjectType):
            if not isinstance(value, ObjectValue):
                self.report(value, f"{where} expects an input object {base.name}")
                return
            given = set()
            for name, item in value.fields:
                given.add(name)
                spec = base.fields.get(name)
                if spec is None:
                    self.report(item, f"unknown field {name!r} on input object {base.name}")
                    continue
                self.literal_value(item, spec.type_ref, declared, where=f"{base.name}.{name}")
            for name, spec in base.fields.items():
                if spec.required and name not in given:
                    self.report(
                        value, f"required field {name!r} missing on input object {base.name}"
                    )

    def scalar_literal(self, value, scalar: ScalarType, where: str) -> None:
        if scalar.literal_kinds is None:
            return  # scalar declares no literal restriction
        if not isinstance(value, scalar.literal_kinds):
            self.report(value, f"{where} expects a {scalar.name} value")


def validate(doc: Document, schema: Schema, max_depth: int | None = None) -> list[GqlViolation]:
    return _Validator(schema, max_depth).validate(doc)
