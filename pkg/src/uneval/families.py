"""Adversarial schema families used as stress fixtures.

Both families consist of an n-branch disjunction closed by an
``unevaluated*: false`` keyword; any annotation-free equivalent must
distinguish every non-empty subset of branches, so rewriting them grows
as 2^n by design.
"""

from __future__ import annotations

from .schema import SchemaDocument, parse_schema


def gen_family_sn(n: int) -> SchemaDocument:
    """Object family: branch i requires property ``a<i>`` and evaluates
    every property whose name contains ``a<i>``."""
    if n < 1:
        raise ValueError("family size must be >= 1")
    return parse_schema(
        {
            "anyOf": [
                {"required": [f"a{i}"], "patternProperties": {f"a{i}": True}}
                for i in range(1, n + 1)
            ],
            "unevaluatedProperties": False,
        }
    )


def gen_family_san(n: int) -> SchemaDocument:
    """Array family: branch i pins the first item to ``T<i>`` and evaluates
    every item satisfying ``T<i>``."""
    if n < 1:
        raise ValueError("family size must be >= 1")
    return parse_schema(
        {
            "anyOf": [
                {
                    "prefixItems": [{"$ref": f"#T{i}"}],
                    "minItems": 1,
                    "contains": {"$ref": f"#T{i}"},
                }
                for i in range(1, n + 1)
            ],
            "unevaluatedItems": False,
            "$defs": {
                f"T{i}": {"$anchor": f"T{i}", "required": [f"a{i}"]}
                for i in range(1, n + 1)
            },
        }
    )
