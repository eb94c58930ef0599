import pytest

from uneval.analysis import PatternSet
from uneval.eliminate import (
    count_uneval_keywords,
    elim_document,
    elim_schema,
    is_uneval_schema,
    p_props,
    pref_its,
    push_uneval_items,
    push_uneval_props,
    unnest,
)
from uneval.enf import enf
from uneval.errors import EliminationError
from uneval.instances import enumerate_instances
from uneval.jsonvalue import serialize_json
from uneval.schema import (
    FALSE_SCHEMA,
    ObjSchema,
    TRUE_SCHEMA,
    keyword_to_json,
    parse_schema,
    schema_to_json,
    serialize_schema,
    walk,
)
from uneval.validator import validate

from conftest import load_corpus
from test_schema import SALE_CAR

WORKED = {
    "items": {
        "anyOf": [{"$ref": "#sale"}, {"$ref": "#car"}],
        "unevaluatedProperties": False,
    },
    "$defs": {
        "sale": {"$anchor": "sale", "properties": {"price": {"type": "integer"}}},
        "car": {"$anchor": "car", "properties": {"model": {"type": "string"}}},
    },
}


def equivalent(doc, other, max_fields=3, max_items=3):
    for instance in enumerate_instances(doc, max_fields=max_fields, max_items=max_items):
        if validate(doc, doc.root, instance).valid != validate(
            other, other.root, instance
        ).valid:
            return False, instance
    return True, None


def test_unnest_hoists_nested_uneval():
    doc = parse_schema(WORKED)
    out = unnest(doc)
    assert sorted(out.defs) == ["__uneval_0", "car", "sale"]
    items = schema_to_json(out.root)["items"]
    assert items == {"$ref": "#/$defs/__uneval_0"}
    hoisted = out.defs["__uneval_0"]
    assert is_uneval_schema(hoisted)
    assert count_uneval_keywords(out) == 1


def test_unnest_no_uneval_unchanged():
    doc = parse_schema(SALE_CAR["$defs"]["sale"])
    out = unnest(doc)
    assert serialize_schema(out) == serialize_schema(doc)


def test_unnest_named_uneval_unchanged():
    doc = parse_schema(
        {
            "$ref": "#/$defs/closed",
            "$defs": {"closed": {"properties": {"a": True}, "unevaluatedProperties": False}},
        }
    )
    out = unnest(doc)
    assert serialize_schema(out) == serialize_schema(doc)


def test_p_props():
    kw = p_props(PatternSet(frozenset({"^price$"})))
    assert keyword_to_json(kw) == {"^price$": {}}
    assert keyword_to_json(p_props(PatternSet(frozenset()))) == {}
    assert sorted(keyword_to_json(p_props(PatternSet(frozenset({"^a$", "^b$"}))))) == [
        "^a$",
        "^b$",
    ]


def test_pref_its():
    assert keyword_to_json(pref_its(0)) == []
    assert keyword_to_json(pref_its(2)) == [True, True]
    assert len(keyword_to_json(pref_its(5))) == 5


def test_push_uneval_props_worked_example():
    doc = parse_schema(SALE_CAR)
    body = ObjSchema((doc.root.get("anyOf"),))
    normalized = enf(doc, body)
    pushed = push_uneval_props(doc, FALSE_SCHEMA, normalized)
    got = schema_to_json(pushed)
    assert got == {
        "anyOf": [
            {"allOf": [{"$ref": "#sale"},
                       {"patternProperties": {"^price$": {}},
                        "additionalProperties": False}]},
            {"allOf": [{"$ref": "#car"},
                       {"patternProperties": {"^plate$": {}},
                        "additionalProperties": False}]},
            {"allOf": [{"allOf": [{"$ref": "#sale"}, {"$ref": "#car"}]},
                       {"patternProperties": {"^plate$": {}, "^price$": {}},
                        "additionalProperties": False}]},
        ]
    }


def test_push_uneval_props_single_true_branch():
    doc = parse_schema(True)
    normalized = enf(doc, doc.root)
    pushed = push_uneval_props(doc, TRUE_SCHEMA, normalized)
    assert schema_to_json(pushed) == {
        "anyOf": [{"allOf": [True, {"patternProperties": {},
                                    "additionalProperties": True}]}]
    }
    for instance in (None, {"a": 1}, [1], "x"):
        assert validate(doc, pushed, instance).valid


def test_push_props_dotstar_branch_is_noop():
    doc = parse_schema({"additionalProperties": {"type": "string"}})
    normalized = enf(doc, doc.root)
    pushed = push_uneval_props(doc, FALSE_SCHEMA, normalized)
    for instance in enumerate_instances(doc, max_fields=2):
        assert (
            validate(doc, doc.root, instance).valid
            == validate(doc, pushed, instance).valid
        )


def test_push_uneval_items_all_evaluated_branch_unchanged():
    doc = parse_schema({"items": {"type": "string"}})
    normalized = enf(doc, doc.root)
    pushed = push_uneval_items(doc, FALSE_SCHEMA, normalized)
    assert schema_to_json(pushed) == {"anyOf": [{"items": {"type": "string"}}]}


def test_push_uneval_items_prefix_branch():
    doc = parse_schema({"prefixItems": [True]})
    pushed = push_uneval_items(doc, FALSE_SCHEMA, enf(doc, doc.root))
    assert schema_to_json(pushed) == {
        "anyOf": [{"allOf": [{"prefixItems": [True]},
                             {"prefixItems": [True],
                              "items": {"anyOf": [False, False]}}]}]
    }
    # arrays longer than the prefix are rejected, like the uneval original
    original = parse_schema({"prefixItems": [True], "unevaluatedItems": False})
    for instance in enumerate_instances(original, max_items=3):
        assert (
            validate(original, original.root, instance).valid
            == validate(doc, pushed, instance).valid
        )


def test_push_uneval_items_contains_branch():
    doc = parse_schema({"contains": {"type": "string"}})
    pushed = push_uneval_items(doc, FALSE_SCHEMA, enf(doc, doc.root))
    got = schema_to_json(pushed)
    assert got["anyOf"][0]["allOf"][1] == {
        "prefixItems": [],
        "items": {"anyOf": [False, {"type": "string"}]},
    }
    original = parse_schema({"contains": {"type": "string"}, "unevaluatedItems": False})
    for instance in enumerate_instances(original, max_items=3):
        assert (
            validate(original, original.root, instance).valid
            == validate(doc, pushed, instance).valid
        )


def test_push_rejects_uncharacterized_branch():
    doc = parse_schema({})
    # a lone branch that is itself an undetermined disjunction is not a
    # legal normal form; the push must refuse it
    fake = parse_schema(
        {"anyOf": [{"anyOf": [{"properties": {"a": True}}, {"properties": {"b": True}}]}]}
    ).root
    with pytest.raises(EliminationError):
        push_uneval_props(doc, FALSE_SCHEMA, fake)


def test_elim_schema_unchanged_without_adk():
    doc = parse_schema({"type": "string"})
    assert elim_schema(doc, doc.root) is doc.root


def test_elim_schema_both_adks_shares_enf():
    doc = parse_schema(
        {
            "properties": {"a": True},
            "unevaluatedProperties": False,
            "unevaluatedItems": False,
        }
    )
    out = elim_schema(doc, doc.root)
    got = schema_to_json(out)
    assert list(got) == ["allOf"]
    props_part, items_part = got["allOf"]
    assert "additionalProperties" in serialize_json(props_part)
    assert "items" in serialize_json(items_part)


def test_elim_document_worked_example():
    doc = parse_schema(WORKED)
    out = elim_document(doc)
    assert count_uneval_keywords(out) == 0
    rewritten = out.defs["__uneval_0"]
    sets = []
    for branch in rewritten.single_keyword("anyOf").value:
        wrap = branch.single_keyword("allOf").value[-1]
        sets.append(sorted(wrap.get("patternProperties").value.keys()))
    assert sets == [["^price$"], ["^model$"], ["^model$", "^price$"]]
    ok, witness = equivalent(doc, out)
    assert ok, witness


def test_elim_document_classical_unchanged():
    doc = parse_schema(
        {"properties": {"a": {"type": "integer"}}, "additionalProperties": False}
    )
    out = elim_document(doc)
    assert serialize_schema(out) == serialize_schema(doc)


def test_elim_document_family_branch_count():
    from uneval.families import gen_family_sn

    doc = gen_family_sn(3)
    out = elim_document(doc)
    assert len(out.root.single_keyword("anyOf").value) == 7
    ok, witness = equivalent(doc, out)
    assert ok, witness


def test_elim_idempotent():
    for source in (WORKED, SALE_CAR):
        doc = parse_schema(source)
        once = elim_document(doc)
        twice = elim_document(once)
        assert serialize_schema(twice) == serialize_schema(once)


def test_elim_output_parses_as_classical():
    from uneval.schema import ADK_NAMES

    for fixture in load_corpus():
        doc = parse_schema(fixture.schema_json)
        out = elim_document(doc)
        reparsed = parse_schema(serialize_schema(out))
        for name, top in reparsed.named_schemas():
            for s in walk(top):
                if isinstance(s, ObjSchema):
                    assert not any(kw.name in ADK_NAMES for kw in s.keywords), fixture.name


def test_size_bound_sanity_on_family():
    from uneval.families import gen_family_sn

    for n in (2, 3, 4):
        doc = gen_family_sn(n)
        nodes_in = sum(1 for _, top in doc.named_schemas() for _ in walk(top))
        out = elim_document(doc)
        nodes_out = sum(1 for _, top in out.named_schemas() for _ in walk(top))
        assert nodes_out <= (2**nodes_in) * nodes_in
