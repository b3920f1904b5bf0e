import random

import pytest

from crm_forge.gql import (
    BooleanValue,
    EnumValue,
    Field,
    FloatValue,
    IntValue,
    ListTypeRef,
    ListValue,
    NamedTypeRef,
    NullValue,
    ObjectValue,
    ParseError,
    StringValue,
    VariableRef,
    parse_source,
    print_document,
)
from gql_fixtures import DocumentGenerator, make_test_schema


class TestOperations:
    def test_named_query_with_required_variable(self):
        doc = parse_source("query Q($id: ID!) { company(id: $id) { name } }")
        assert len(doc.operations) == 1
        op = doc.operations[0]
        assert (op.op_type, op.name) == ("query", "Q")
        assert len(op.variable_defs) == 1
        var = op.variable_defs[0]
        assert var.name == "id"
        assert var.type_ref == NamedTypeRef("ID", non_null=True)
        assert var.required and not var.has_default
        company = op.selection_set[0]
        assert company.alias is None
        assert company.arguments[0].value == VariableRef("id")
        assert company.selection_set == (Field(name="name"),)

    def test_anonymous_query_with_sibling_fields(self):
        doc = parse_source("{ a b }")
        op = doc.operations[0]
        assert op.op_type == "query" and op.name is None
        assert [f.name for f in op.selection_set] == ["a", "b"]

    def test_mutation_and_subscription(self):
        doc = parse_source("mutation M { bump }\n\nsubscription S { itemAdded { id } }")
        assert [op.op_type for op in doc.operations] == ["mutation", "subscription"]

    def test_variable_defaults(self):
        doc = parse_source("query($n: Int = 5, $s: String = \"hi\") { f }")
        defs = doc.operations[0].variable_defs
        assert defs[0].default == IntValue(5)
        assert not defs[0].required
        assert defs[1].default == StringValue("hi")

    def test_list_type_refs(self):
        doc = parse_source("query($ids: [ID!]!, $tags: [String]) { f }")
        first, second = doc.operations[0].variable_defs
        assert first.type_ref == ListTypeRef(NamedTypeRef("ID", non_null=True), non_null=True)
        assert second.type_ref == ListTypeRef(NamedTypeRef("String"))

    def test_alias(self):
        doc = parse_source("{ renamed: original }")
        field = doc.operations[0].selection_set[0]
        assert (field.alias, field.name, field.response_key) == ("renamed", "original", "renamed")


class TestValues:
    def test_every_literal_kind(self):
        doc = parse_source(
            '{ f(i: 1, fl: 1.5, s: "x", b: true, n: null, e: RED, l: [1, 2], o: {a: 1, b: [true]}) }'
        )
        args = {a.name: a.value for a in doc.operations[0].selection_set[0].arguments}
        assert args["i"] == IntValue(1)
        assert args["fl"] == FloatValue(1.5)
        assert args["s"] == StringValue("x")
        assert args["b"] == BooleanValue(True)
        assert args["n"] == NullValue()
        assert args["e"] == EnumValue("RED")
        assert args["l"] == ListValue((IntValue(1), IntValue(2)))
        assert args["o"] == ObjectValue((("a", IntValue(1)), ("b", ListValue((BooleanValue(True),)))))

    def test_nested_input_objects(self):
        doc = parse_source('{ f(o: {inner: {deep: "v"}}) }')
        value = doc.operations[0].selection_set[0].arguments[0].value
        assert value == ObjectValue((("inner", ObjectValue((("deep", StringValue("v")),))),))


class TestRejections:
    def test_fragment_spread(self):
        with pytest.raises(ParseError) as err:
            parse_source("{ ...frag }")
        assert "fragments are unsupported" in err.value.message

    def test_fragment_definition(self):
        with pytest.raises(ParseError) as err:
            parse_source("fragment F on Query { a }")
        assert "fragments are unsupported" in err.value.message

    def test_directives(self):
        for source in ("{ a @skip }", "query @cached { a }", "query Q @x { a }"):
            with pytest.raises(ParseError) as err:
                parse_source(source)
            assert "directives are unsupported" in err.value.message

    @pytest.mark.parametrize(
        "source",
        [
            "",
            "{}",
            "{ a } garbage",
            "query ($x Int) { a }",
            "query { a(: 1) }",
            "{ a( ) }",
            "query () { a }",
            "{ a: }",
            "query($x: Int = $y) { a }",
        ],
    )
    def test_malformed(self, source):
        with pytest.raises(ParseError):
            parse_source(source)

    def test_error_position_points_inside_source(self):
        source = "query Q {\n  a {\n    ...spread\n  }\n}"
        with pytest.raises(ParseError) as err:
            parse_source(source)
        assert 1 <= err.value.line <= source.count("\n") + 1
        assert (err.value.line, err.value.column) == (3, 5)


class TestRoundTrip:
    def test_canonical_printer_examples(self):
        source = 'query Q($id: ID!) { company(id: $id) { name open: openDealsAmount } }'
        doc = parse_source(source)
        printed = print_document(doc)
        assert parse_source(printed) == doc

    def test_random_documents_round_trip(self):
        schema = make_test_schema()
        rng = random.Random(123456)
        for op_type in ("query", "mutation", "subscription"):
            for _ in range(150):
                gen = DocumentGenerator(schema, rng)
                source, _variables = gen.document(op_type)
                doc = parse_source(source)
                assert parse_source(print_document(doc)) == doc

    def test_printer_idempotent(self):
        schema = make_test_schema()
        rng = random.Random(99)
        for _ in range(50):
            source, _ = DocumentGenerator(schema, rng).document("query")
            doc = parse_source(source)
            once = print_document(doc)
            assert print_document(parse_source(once)) == once
