"""Self-contained GraphQL subset engine.

Pipeline: ``tokenize`` -> ``parse`` -> ``validate`` -> ``execute``; the
``run`` helper chains all four and always returns a response. Fragments,
directives, interfaces, unions, and introspection beyond ``__typename`` are
out of scope and rejected with explicit errors.
"""

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
    VariableDef,
    VariableRef,
    print_document,
)
from .lexer import LexError, Token, TokenKind, tokenize
from .parser import ParseError, parse, parse_source
from .schema import (
    ArgDef,
    EnumType,
    FieldDef,
    InputObjectType,
    ObjectType,
    ScalarType,
    Schema,
    SchemaError,
    list_of,
    ref,
    render_sdl,
)
from .validate import GqlViolation, document_depth, validate
from .execute import (
    GqlError,
    GqlResponse,
    MultipleRootFields,
    OperationNotFound,
    SubscriptionPlan,
    SubscriptionRequiresSocket,
    UnknownSubscriptionField,
    VariableCoercionError,
    execute,
    resolve_subscription,
    run,
)

__all__ = [name for name in dir() if not name.startswith("_")]
