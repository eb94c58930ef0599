"""Schema AST for the static Draft 2020-12 subset.

A schema is either a boolean or an ordered keyword list.  Keywords are
partitioned into three classes that fix the evaluation order:

* independent keywords (``properties``, ``anyOf``, ``$ref``, ...),
* statically dependent keywords (``additionalProperties``, ``items``),
  which read the syntax of their independent neighbours,
* annotation dependent keywords (``unevaluatedProperties``,
  ``unevaluatedItems``), which read the runtime annotation.

Parsing reorders keywords into that partition order, indexes ``$defs``
and ``$anchor`` targets, and checks that every reference resolves inside
the document.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional

from .errors import GuardednessError, RefResolutionError, SchemaParseError
from .jsonvalue import JsonValue, is_number, serialize_json

INF = math.inf

TYPE_NAMES = ("object", "number", "integer", "string", "array", "boolean", "null")

SDK_NAMES = ("additionalProperties", "items")
ADK_NAMES = ("unevaluatedProperties", "unevaluatedItems")

#: Keywords we recognise but deliberately do not support; silently treating
#: them as inert unknowns would change validation outcomes.
UNSUPPORTED_NAMES = (
    "$id",
    "$dynamicRef",
    "$dynamicAnchor",
    "dependentSchemas",
    "exclusiveMinimum",
    "exclusiveMaximum",
)

SCHEMA_VALUED = (
    "not",
    "propertyNames",
    "contains",
    "additionalProperties",
    "items",
    "unevaluatedProperties",
    "unevaluatedItems",
)
LIST_VALUED = ("anyOf", "allOf", "oneOf", "prefixItems")
MAP_VALUED = ("properties", "patternProperties")
BOOLEAN_APPLICATORS = ("anyOf", "allOf", "oneOf", "not")

_PLAIN_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


def keyword_rank(name: str) -> int:
    if name in ADK_NAMES:
        return 2
    if name in SDK_NAMES:
        return 1
    return 0


@dataclass(frozen=True)
class Keyword:
    """One schema keyword: a name plus its parsed argument.

    Argument shapes: ``Schema`` for schema-valued keywords, tuples of
    ``Schema`` for list-valued ones, ``dict[str, Schema]`` for map-valued
    ones, and plain scalars/JSON otherwise.  Unknown keywords keep their
    raw JSON argument and are inert during validation.
    """

    name: str
    value: Any

    def __repr__(self):  # compact, for assertion messages
        return f"Keyword({self.name!r})"


class Schema:
    __slots__ = ()


@dataclass(frozen=True)
class BoolSchema(Schema):
    value: bool


@dataclass(frozen=True)
class ObjSchema(Schema):
    keywords: tuple[Keyword, ...]

    def get(self, name: str) -> Optional[Keyword]:
        for kw in self.keywords:
            if kw.name == name:
                return kw
        return None

    def single_keyword(self, name: str) -> Optional[Keyword]:
        """The keyword, provided it is the only one in this schema."""
        if len(self.keywords) == 1 and self.keywords[0].name == name:
            return self.keywords[0]
        return None


TRUE_SCHEMA = BoolSchema(True)
FALSE_SCHEMA = BoolSchema(False)


def make_obj(*keywords: Keyword) -> ObjSchema:
    """Build an object schema, reordering keywords into the grammar partition."""
    ordered = tuple(sorted(keywords, key=lambda kw: keyword_rank(kw.name)))
    names = [kw.name for kw in ordered]
    if len(names) != len(set(names)):
        raise SchemaParseError(f"duplicate keyword among {names}")
    return ObjSchema(ordered)


def any_of(branches: Iterable[Schema]) -> ObjSchema:
    return ObjSchema((Keyword("anyOf", tuple(branches)),))


def all_of(branches: Iterable[Schema]) -> ObjSchema:
    return ObjSchema((Keyword("allOf", tuple(branches)),))


def not_(s: Schema) -> ObjSchema:
    return ObjSchema((Keyword("not", s),))


def ref(uri: str) -> ObjSchema:
    return ObjSchema((Keyword("$ref", uri),))


@dataclass
class SchemaDocument:
    """A closed schema: a root plus its named definitions and anchors."""

    root: Schema
    defs: dict[str, Schema] = field(default_factory=dict)
    anchors: dict[str, Schema] = field(default_factory=dict)

    def named_schemas(self) -> Iterator[tuple[str, Schema]]:
        """Root first (name ``""``), then definitions in name order."""
        yield "", self.root
        for name in sorted(self.defs):
            yield name, self.defs[name]


# ---------------------------------------------------------------------------
# parsing


_pattern_cache: dict[str, re.Pattern] = {}


def compile_pattern(source: str) -> re.Pattern:
    pat = _pattern_cache.get(source)
    if pat is None:
        pat = re.compile(source)
        _pattern_cache[source] = pat
    return pat


def pattern_matches(source: str, name: str) -> bool:
    """Unanchored match: the pattern 'a' matches any string containing 'a'."""
    return compile_pattern(source).search(name) is not None


def _parse_number(v, path):
    if is_number(v):
        return v
    raise SchemaParseError(f"expected a number, got {type_name(v)}", path)


def type_name(v) -> str:
    from .jsonvalue import type_of

    try:
        return type_of(v)
    except TypeError:
        return type(v).__name__


def _parse_nonneg_int(v, path):
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SchemaParseError("expected a non-negative integer", path)
    return v


def _parse_pattern(v, path):
    if not isinstance(v, str):
        raise SchemaParseError("expected a pattern string", path)
    try:
        compile_pattern(v)
    except re.error as exc:
        raise SchemaParseError(f"invalid regular expression {v!r}: {exc}", path)
    return v


class _Parser:
    def __init__(self):
        self.scalar_parsers: dict[str, Callable] = {
            "minimum": _parse_number,
            "maximum": _parse_number,
            "pattern": _parse_pattern,
            "minProperties": _parse_nonneg_int,
            "maxProperties": _parse_nonneg_int,
            "minItems": _parse_nonneg_int,
            "maxItems": _parse_nonneg_int,
            "minContains": _parse_nonneg_int,
            "maxContains": _parse_nonneg_int,
        }

    def parse_schema_node(self, v: JsonValue, path: str, named_top: bool) -> Schema:
        if isinstance(v, bool):
            return BoolSchema(v)
        if not isinstance(v, dict):
            raise SchemaParseError(
                f"a schema must be a boolean or an object, got {type_name(v)}", path
            )
        keywords: list[Keyword] = []
        for name, arg in v.items():
            keywords.append(self.parse_keyword(name, arg, f"{path}/{name}", named_top))
        keywords = self._normalize_contains(keywords, path)
        keywords.sort(key=lambda kw: keyword_rank(kw.name))
        return ObjSchema(tuple(keywords))

    def parse_keyword(self, name: str, arg, path: str, named_top: bool) -> Keyword:
        if name in UNSUPPORTED_NAMES:
            raise SchemaParseError(f"keyword {name!r} is not supported", path)
        if name == "$defs":
            raise SchemaParseError(
                "$defs is only allowed at the top level of the document", path
            )
        if name == "$anchor":
            if not named_top:
                raise SchemaParseError(
                    "$anchor is only supported at the top level of the root "
                    "or of a named schema",
                    path,
                )
            if not isinstance(arg, str) or not _PLAIN_NAME_RE.match(arg):
                raise SchemaParseError("expected a plain-name anchor", path)
            return Keyword(name, arg)
        if name == "$ref":
            if not isinstance(arg, str):
                raise SchemaParseError("expected a reference string", path)
            if not (
                arg.startswith("#/$defs/")
                and "/" not in arg[len("#/$defs/") :]
                and arg[len("#/$defs/") :]
            ) and not (arg.startswith("#") and _PLAIN_NAME_RE.match(arg[1:] or " ")):
                raise SchemaParseError(
                    f"only local references of shape '#/$defs/name' or "
                    f"'#anchor' are supported, got {arg!r}",
                    path,
                )
            return Keyword(name, arg)
        if name == "type":
            if arg not in TYPE_NAMES:
                raise SchemaParseError(f"unknown type {arg!r}", path)
            return Keyword(name, arg)
        if name == "const":
            return Keyword(name, arg)
        if name == "required":
            if not isinstance(arg, list) or not all(isinstance(k, str) for k in arg):
                raise SchemaParseError("expected an array of property names", path)
            return Keyword(name, tuple(arg))
        if name == "uniqueItems":
            if not isinstance(arg, bool):
                raise SchemaParseError("expected a boolean", path)
            return Keyword(name, arg)
        if name in self.scalar_parsers:
            return Keyword(name, self.scalar_parsers[name](arg, path))
        if name in SCHEMA_VALUED:
            return Keyword(name, self.parse_schema_node(arg, path, False))
        if name in LIST_VALUED:
            if not isinstance(arg, list):
                raise SchemaParseError("expected an array of schemas", path)
            return Keyword(
                name,
                tuple(
                    self.parse_schema_node(s, f"{path}/{i}", False)
                    for i, s in enumerate(arg)
                ),
            )
        if name in MAP_VALUED:
            if not isinstance(arg, dict):
                raise SchemaParseError("expected an object of schemas", path)
            if name == "patternProperties":
                for p in arg:
                    _parse_pattern(p, f"{path}/{p}")
            parsed = {
                key: self.parse_schema_node(arg[key], f"{path}/{key}", False)
                for key in sorted(arg)
            }
            return Keyword(name, parsed)
        # anything else is inert during validation and round-trips verbatim
        return Keyword(name, arg)

    @staticmethod
    def _normalize_contains(keywords: list[Keyword], path: str) -> list[Keyword]:
        """Insert default minContains/maxContains next to contains; drop strays."""
        has_contains = any(kw.name == "contains" for kw in keywords)
        if not has_contains:
            return [kw for kw in keywords if kw.name not in ("minContains", "maxContains")]
        names = {kw.name for kw in keywords}
        out: list[Keyword] = []
        for kw in keywords:
            out.append(kw)
            if kw.name == "contains":
                if "minContains" not in names:
                    out.append(Keyword("minContains", 1))
                if "maxContains" not in names:
                    out.append(Keyword("maxContains", INF))
        return out


def parse_schema(v: JsonValue) -> SchemaDocument:
    """Parse a JSON value into a schema document.

    Keywords are canonically reordered, ``$defs``/``$anchor`` are indexed,
    ``minContains``/``maxContains`` defaults are materialized, and the
    document is checked to be closed (every reference resolves).
    """
    parser = _Parser()
    defs: dict[str, Schema] = {}
    if isinstance(v, dict) and "$defs" in v:
        defs_json = v["$defs"]
        if not isinstance(defs_json, dict):
            raise SchemaParseError("expected an object of named schemas", "/$defs")
        for name in sorted(defs_json):
            defs[name] = parser.parse_schema_node(
                defs_json[name], f"/$defs/{name}", named_top=True
            )
        v = {k: val for k, val in v.items() if k != "$defs"}
    root = parser.parse_schema_node(v, "", named_top=True)
    doc = SchemaDocument(root=root, defs=defs)
    _index_anchors(doc)
    _check_closed(doc)
    return doc


def build_document(root: Schema, defs: dict[str, Schema]) -> SchemaDocument:
    """Assemble a document from already-parsed schemas and re-index anchors."""
    doc = SchemaDocument(root=root, defs=dict(defs))
    _index_anchors(doc)
    _check_closed(doc)
    return doc


def _index_anchors(doc: SchemaDocument) -> None:
    anchors: dict[str, Schema] = {}
    for name, schema in doc.named_schemas():
        if not isinstance(schema, ObjSchema):
            continue
        kw = schema.get("$anchor")
        if kw is None:
            continue
        anchor = kw.value
        if anchor in anchors and anchors[anchor] is not schema:
            raise SchemaParseError(
                f"anchor {anchor!r} is declared by two different schemas", "/$defs"
            )
        if anchor in doc.defs and doc.defs[anchor] is not schema:
            raise SchemaParseError(
                f"anchor {anchor!r} collides with the definition of the same "
                "name but designates a different schema",
                "/$defs",
            )
        anchors[anchor] = schema
    doc.anchors = anchors


def _check_closed(doc: SchemaDocument) -> None:
    for _, top in doc.named_schemas():
        for s in walk(top):
            if isinstance(s, ObjSchema):
                kw = s.get("$ref")
                if kw is not None:
                    deref(doc, kw.value)  # raises if unresolved


def deref(doc: SchemaDocument, uri: str) -> Schema:
    """Resolve ``#/$defs/name`` or ``#anchor`` inside the document."""
    if uri.startswith("#/$defs/"):
        name = uri[len("#/$defs/") :]
        try:
            return doc.defs[name]
        except KeyError:
            raise RefResolutionError(f"unresolved reference {uri!r}") from None
    if uri.startswith("#") and len(uri) > 1:
        try:
            return doc.anchors[uri[1:]]
        except KeyError:
            raise RefResolutionError(f"unresolved reference {uri!r}") from None
    raise RefResolutionError(f"unsupported reference shape {uri!r}")


# ---------------------------------------------------------------------------
# traversal


def child_schemas(s: Schema) -> Iterator[tuple[Keyword, Schema]]:
    """All directly nested subschemas, with the keyword that holds them."""
    if not isinstance(s, ObjSchema):
        return
    for kw in s.keywords:
        if kw.name in SCHEMA_VALUED:
            yield kw, kw.value
        elif kw.name in LIST_VALUED:
            for sub in kw.value:
                yield kw, sub
        elif kw.name in MAP_VALUED:
            for sub in kw.value.values():
                yield kw, sub


def walk(s: Schema) -> Iterator[Schema]:
    """The schema and all of its nested subschemas, pre-order."""
    yield s
    for _, child in child_schemas(s):
        yield from walk(child)


def document_schemas(doc: SchemaDocument) -> Iterator[Schema]:
    for _, top in doc.named_schemas():
        yield from walk(top)


# ---------------------------------------------------------------------------
# guarded recursion and in-place depth


def _inplace_edges(
    doc: SchemaDocument, s: Schema
) -> Iterator[tuple[str, Schema]]:
    """Successors of a schema through boolean keywords and references."""
    if not isinstance(s, ObjSchema):
        return
    for kw in s.keywords:
        if kw.name in ("anyOf", "allOf", "oneOf"):
            for i, sub in enumerate(kw.value):
                yield f"{kw.name}[{i}]", sub
        elif kw.name == "not":
            yield "not", kw.value
        elif kw.name == "$ref":
            yield f"$ref:{kw.value}", deref(doc, kw.value)


def find_unguarded_cycle(doc: SchemaDocument) -> Optional[list[str]]:
    """One cycle of the immediately-unguardedly-depends graph, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[int, int] = {}

    def visit(s: Schema, trail: list[str]) -> Optional[list[str]]:
        state = color.get(id(s), WHITE)
        if state == GREY:
            return trail
        if state == BLACK:
            return None
        color[id(s)] = GREY
        for label, nxt in _inplace_edges(doc, s):
            found = visit(nxt, trail + [label])
            if found is not None:
                return found
        color[id(s)] = BLACK
        return None

    for name, top in doc.named_schemas():
        start = f"#/$defs/{name}" if name else "#"
        for s in walk(top):
            found = visit(s, [start])
            if found is not None:
                return found
    return None


def check_guarded(doc: SchemaDocument) -> bool:
    """True iff every reference cycle crosses a structural keyword."""
    return find_unguarded_cycle(doc) is None


def boolean_one_of(args: Iterable[Schema]) -> Schema:
    """Expand exclusive choice into anyOf-of-allOf with negated siblings."""
    branches = []
    args = tuple(args)
    for i, s in enumerate(args):
        conj = tuple(
            args[j] if j == i else not_(args[j]) for j in range(len(args))
        )
        branches.append(all_of(conj))
    return any_of(branches)


def in_place_depth(doc: SchemaDocument, node: Schema | Keyword) -> int:
    """Nesting measure through boolean keywords and references.

    Well defined exactly when recursion is guarded; an unguarded cycle is
    reported as :class:`GuardednessError`.
    """
    memo: dict[int, int] = {}
    in_progress: set[int] = set()
    pins: list = []  # keeps temporary schemas alive so ids stay unique

    def depth_schema(s: Schema) -> int:
        if isinstance(s, BoolSchema):
            return 0
        key = id(s)
        if key in memo:
            return memo[key]
        if key in in_progress:
            raise GuardednessError(["<cycle through in-place keywords>"])
        in_progress.add(key)
        pins.append(s)
        result = max((depth_keyword(kw) for kw in s.keywords), default=0) + 1
        in_progress.discard(key)
        memo[key] = result
        return result

    def depth_keyword(kw: Keyword) -> int:
        if kw.name in ("allOf", "anyOf"):
            return max((depth_schema(s) for s in kw.value), default=0) + 1
        if kw.name == "not":
            return depth_schema(kw.value) + 1
        if kw.name == "oneOf":
            return depth_schema(boolean_one_of(kw.value)) + 1
        if kw.name == "$ref":
            return depth_schema(deref(doc, kw.value)) + 1
        return 0

    if isinstance(node, Keyword):
        return depth_keyword(node)
    return depth_schema(node)


# ---------------------------------------------------------------------------
# serialization


def keyword_to_json(kw: Keyword) -> JsonValue:
    if kw.name in SCHEMA_VALUED:
        return schema_to_json(kw.value)
    if kw.name in LIST_VALUED:
        return [schema_to_json(s) for s in kw.value]
    if kw.name in MAP_VALUED:
        return {k: schema_to_json(s) for k, s in kw.value.items()}
    if kw.name == "required":
        return list(kw.value)
    return kw.value


def schema_to_json(s: Schema) -> JsonValue:
    if isinstance(s, BoolSchema):
        return s.value
    out: dict[str, JsonValue] = {}
    for kw in s.keywords:
        # materialized defaults disappear again on output
        if kw.name == "minContains" and kw.value == 1:
            continue
        if kw.name == "maxContains" and kw.value == INF:
            continue
        out[kw.name] = keyword_to_json(kw)
    return out


def serialize_schema(doc: SchemaDocument) -> JsonValue:
    """JSON form of the document, keywords in canonical partition order."""
    root = schema_to_json(doc.root)
    if doc.defs:
        if not isinstance(root, dict):
            raise SchemaParseError("cannot attach $defs to a boolean root schema")
        root["$defs"] = {name: schema_to_json(s) for name, s in sorted(doc.defs.items())}
    return root


def canonical_text(s: Schema) -> str:
    """Deterministic text form used for deduplication and guard comparison."""
    return serialize_json(schema_to_json(s))
