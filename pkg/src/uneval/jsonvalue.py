"""JSON value model with exact decimal numbers.

Instances are plain Python trees: ``None``, ``bool``, ``int``/``Decimal``,
``str``, ``list``, ``dict``.  Numbers are kept as exact decimals so that
``minimum``/``maximum``/``const`` comparisons never go through binary
floats and ``1.0`` equals ``1`` by mathematical value.
"""

from __future__ import annotations

import json
from decimal import Decimal
from typing import Union

from .errors import DuplicateKeyError, JsonParseError

JsonValue = Union[None, bool, int, float, Decimal, str, list, dict]

_TYPE_NAMES = {
    type(None): "null",
    bool: "boolean",
    int: "number",
    float: "number",
    Decimal: "number",
    str: "string",
    list: "array",
    dict: "object",
}


def type_of(v: JsonValue) -> str:
    """Return the JSON type name of a value ('null', 'boolean', ...)."""
    # bool is a subclass of int, so it must win the dispatch
    if isinstance(v, bool):
        return "boolean"
    for py_type, name in _TYPE_NAMES.items():
        if isinstance(v, py_type):
            return name
    raise TypeError(f"not a JSON value: {v!r}")


def is_number(v: JsonValue) -> bool:
    return not isinstance(v, bool) and isinstance(v, (int, float, Decimal))


def is_integer_valued(v: JsonValue) -> bool:
    """True for numbers with zero fractional part (the 'integer' type)."""
    if not is_number(v):
        return False
    if isinstance(v, int):
        return True
    if isinstance(v, float):
        return v == int(v)
    return v == v.to_integral_value()


def _reject_constant(name: str):
    raise JsonParseError(f"non-finite number literal {name!r} is not allowed")


class _DuplicateCheckingPairs:
    def __call__(self, pairs):
        obj: dict = {}
        for key, value in pairs:
            if key in obj:
                raise DuplicateKeyError(f"duplicate object key {key!r}")
            obj[key] = value
        return obj


def parse_json(text: str | bytes) -> JsonValue:
    """Parse JSON text into a value tree.

    Floats are decoded as ``Decimal``; duplicate object keys are rejected.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        return json.loads(
            text,
            parse_float=Decimal,
            parse_constant=_reject_constant,
            object_pairs_hook=_DuplicateCheckingPairs(),
        )
    except DuplicateKeyError:
        raise
    except json.JSONDecodeError as exc:
        raise JsonParseError(exc.msg, offset=exc.pos) from None


def json_equal(a: JsonValue, b: JsonValue) -> bool:
    """Structural equality: objects order-insensitive, numbers by value.

    Booleans are never equal to numbers (``true != 1``), unlike Python's
    native ``==``.
    """
    a_bool = isinstance(a, bool)
    b_bool = isinstance(b, bool)
    if a_bool or b_bool:
        return a_bool and b_bool and a == b
    if is_number(a) and is_number(b):
        return a == b
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(json_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        if set(a.keys()) != set(b.keys()):
            return False
        return all(json_equal(a[k], b[k]) for k in a)
    return False


def format_number(v: int | float | Decimal) -> str:
    """Canonical plain-decimal rendering: no exponent, no trailing zeros."""
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        # repr is the shortest decimal that round-trips the float
        v = Decimal(repr(v))
    if v == 0:
        return "0"
    sign, digits, exp = v.as_tuple()
    # strip trailing zeros without Decimal.normalize(), which would round
    # to the thread's context precision
    while len(digits) > 1 and digits[-1] == 0:
        digits = digits[:-1]
        exp += 1
    s = "".join(map(str, digits))
    if exp >= 0:
        out = s + "0" * exp
    elif len(s) > -exp:
        out = s[:exp] + "." + s[exp:]
    else:
        out = "0." + "0" * (-exp - len(s)) + s
    return "-" + out if sign else out


def _write_canonical(v: JsonValue, emit) -> None:
    if v is None:
        emit("null")
    elif isinstance(v, bool):
        emit("true" if v else "false")
    elif is_number(v):
        emit(format_number(v))
    elif isinstance(v, str):
        emit(json.dumps(v, ensure_ascii=False))
    elif isinstance(v, list):
        emit("[")
        for i, item in enumerate(v):
            if i:
                emit(",")
            _write_canonical(item, emit)
        emit("]")
    elif isinstance(v, dict):
        emit("{")
        for i, key in enumerate(sorted(v.keys())):
            if i:
                emit(",")
            emit(json.dumps(key, ensure_ascii=False))
            emit(":")
            _write_canonical(v[key], emit)
        emit("}")
    else:
        raise TypeError(f"not a JSON value: {v!r}")


def serialize_json(v: JsonValue) -> str:
    """Canonical serialization: compact, object keys in lexicographic order.

    Deterministic by construction, so equal values always serialize to the
    same text; schema deduplication relies on this.
    """
    parts: list[str] = []
    _write_canonical(v, parts.append)
    return "".join(parts)


def dump_json(v: JsonValue, indent: int = 2) -> str:
    """Pretty writer that preserves dict insertion order (for schema output)."""

    def rec(node: JsonValue, depth: int) -> str:
        pad = " " * (indent * depth)
        inner = " " * (indent * (depth + 1))
        if isinstance(node, dict):
            if not node:
                return "{}"
            rows = [
                f"{inner}{json.dumps(k, ensure_ascii=False)}: {rec(val, depth + 1)}"
                for k, val in node.items()
            ]
            return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
        if isinstance(node, list):
            if not node:
                return "[]"
            rows = [f"{inner}{rec(item, depth + 1)}" for item in node]
            return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
        if node is None:
            return "null"
        if isinstance(node, bool):
            return "true" if node else "false"
        if is_number(node):
            return format_number(node)
        return json.dumps(node, ensure_ascii=False)

    return rec(v, 0)
