"""Rewriting unevaluatedProperties/unevaluatedItems away.

The driver hoists every nested schema carrying an ``unevaluated*``
keyword into ``$defs`` (so rewrites never nest), then rewrites each named
schema: the keywords before the ``unevaluated*`` are brought into
evaluation normal form, and each branch is conjoined with an
annotation-free re-statement of the constraint, built from the branch's
exact evaluation sets (``patternProperties``+``additionalProperties`` on
the property side, ``prefixItems``+``items`` on the item side).
"""

from __future__ import annotations

from typing import Optional

from .analysis import Analyzer, PatternSet
from .enf import EnfBuilder
from .errors import EliminationError, GuardednessError
from .schema import (
    ADK_NAMES,
    INF,
    BoolSchema,
    Keyword,
    ObjSchema,
    Schema,
    SchemaDocument,
    TRUE_SCHEMA,
    all_of,
    any_of,
    build_document,
    deref,
    find_unguarded_cycle,
    make_obj,
    ref,
    walk,
    LIST_VALUED,
    MAP_VALUED,
    SCHEMA_VALUED,
)


def is_uneval_schema(s: Schema) -> bool:
    """True for object schemas with a top-level unevaluated* keyword."""
    return isinstance(s, ObjSchema) and any(
        kw.name in ADK_NAMES for kw in s.keywords
    )


def count_uneval_keywords(doc: SchemaDocument) -> int:
    """Residual unevaluated* occurrences in a whole document."""
    total = 0
    for name, top in doc.named_schemas():
        for s in walk(top):
            if isinstance(s, ObjSchema):
                total += sum(1 for kw in s.keywords if kw.name in ADK_NAMES)
    return total


# ---------------------------------------------------------------------------
# unnesting


class _FreshNames:
    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.counter = 0

    def next(self) -> str:
        while True:
            name = f"__uneval_{self.counter}"
            self.counter += 1
            if name not in self.taken:
                self.taken.add(name)
                return name


def _rebuild_keyword(kw: Keyword, rewrite) -> Keyword:
    if kw.name in SCHEMA_VALUED:
        return Keyword(kw.name, rewrite(kw.value))
    if kw.name in LIST_VALUED:
        return Keyword(kw.name, tuple(rewrite(s) for s in kw.value))
    if kw.name in MAP_VALUED:
        return Keyword(kw.name, {k: rewrite(s) for k, s in kw.value.items()})
    return kw


def unnest(doc: SchemaDocument) -> SchemaDocument:
    """Hoist nested uneval-schemas into fresh definitions.

    Afterwards every unevaluated* keyword sits at the top level of a named
    schema, and uneval-schemas reach each other only through references.
    """
    fresh = _FreshNames(set(doc.defs))
    new_defs: dict[str, Schema] = {}

    def hoist(s: Schema) -> Schema:
        """Rewrite children post-order; replace uneval occurrences by refs."""
        rebuilt = rewrite_children(s)
        if is_uneval_schema(rebuilt):
            name = fresh.next()
            new_defs[name] = rebuilt
            return ref(f"#/$defs/{name}")
        return rebuilt

    def rewrite_children(s: Schema) -> Schema:
        if not isinstance(s, ObjSchema):
            return s
        return ObjSchema(tuple(_rebuild_keyword(kw, hoist) for kw in s.keywords))

    defs = {name: rewrite_children(s) for name, s in doc.defs.items()}
    root = rewrite_children(doc.root)
    defs.update(new_defs)
    return build_document(root, defs)


# ---------------------------------------------------------------------------
# pushing


EMPTY_OBJ_SCHEMA = ObjSchema(())


def p_props(patterns: PatternSet) -> Keyword:
    """patternProperties listing the given patterns, each mapped to {}."""
    return Keyword(
        "patternProperties", {p: EMPTY_OBJ_SCHEMA for p in sorted(patterns.patterns)}
    )


def pref_its(h: int) -> Keyword:
    """prefixItems of h unconstrained slots, evaluating the first h items."""
    if h == INF:
        raise EliminationError("prefix length must be finite")
    return Keyword("prefixItems", tuple(TRUE_SCHEMA for _ in range(int(h))))


def _branches_of(enf_schema: Schema) -> tuple[Schema, ...]:
    if isinstance(enf_schema, ObjSchema):
        kw = enf_schema.single_keyword("anyOf")
        if kw is not None:
            return kw.value
    raise EliminationError("expected a single-anyOf normalized schema")


def push_uneval_props(
    doc: SchemaDocument,
    s_u: Schema,
    enf_schema: Schema,
    analyzer: Optional[Analyzer] = None,
) -> Schema:
    """Conjoin every branch with its property-evaluation complement check."""
    an = analyzer or Analyzer(doc)
    out = []
    for branch in _branches_of(enf_schema):
        pats = an.ex_ep(branch)
        if pats is None:
            raise EliminationError(
                "normalized branch has no exact property characterization"
            )
        wrap = make_obj(p_props(pats), Keyword("additionalProperties", s_u))
        out.append(all_of((branch, wrap)))
    return any_of(out)


def push_uneval_items(
    doc: SchemaDocument,
    s_u: Schema,
    enf_schema: Schema,
    analyzer: Optional[Analyzer] = None,
) -> Schema:
    """Conjoin every branch with its item-evaluation complement check.

    A branch that already evaluates every item is left unchanged.
    """
    an = analyzer or Analyzer(doc)
    out = []
    for branch in _branches_of(enf_schema):
        pair = an.ex_ei(branch)
        if pair is None:
            raise EliminationError(
                "normalized branch has no exact item characterization"
            )
        if pair.h == INF or (
            isinstance(pair.guard, BoolSchema) and pair.guard.value
        ):
            out.append(branch)
            continue
        tail = any_of((s_u, pair.guard))
        wrap = make_obj(pref_its(pair.h), Keyword("items", tail))
        out.append(all_of((branch, wrap)))
    return any_of(out)


# ---------------------------------------------------------------------------
# the eliminator


class _ElimRun:
    def __init__(self, doc: SchemaDocument):
        self.doc = doc
        self.analyzer = Analyzer(doc)
        self.enf_builder = EnfBuilder(doc, self.analyzer, resolve_ref=self._resolve)
        self._by_id = {id(s): name for name, s in doc.defs.items()}
        self._by_id[id(doc.root)] = ""
        self._memo: dict[str, Schema] = {}
        self._in_progress: set[str] = set()
        self.enf_branches: dict[str, int] = {}

    def _named(self, name: str) -> Schema:
        return self.doc.root if name == "" else self.doc.defs[name]

    def _resolve(self, uri: str) -> Schema:
        target = deref(self.doc, uri)
        if is_uneval_schema(target):
            name = self._by_id.get(id(target))
            if name is None:
                raise EliminationError(
                    f"reference {uri!r} reaches an unnamed uneval-schema; "
                    "the document was not unnested"
                )
            return self.elim_named(name)
        return target

    def elim_named(self, name: str) -> Schema:
        if name in self._memo:
            return self._memo[name]
        if name in self._in_progress:
            raise GuardednessError([f"#/$defs/{name}", "..."])
        self._in_progress.add(name)
        try:
            result = self.elim(self._named(name), stats_key=name)
        finally:
            self._in_progress.discard(name)
        self._memo[name] = result
        return result

    def elim(self, s: Schema, stats_key: str | None = None) -> Schema:
        if not is_uneval_schema(s):
            return s
        assert isinstance(s, ObjSchema)
        anchor = s.get("$anchor")
        body = tuple(
            kw
            for kw in s.keywords
            if kw.name not in ADK_NAMES and kw.name != "$anchor"
        )
        s_props = s.get("unevaluatedProperties")
        s_items = s.get("unevaluatedItems")
        normalized = self.enf_builder.enf(ObjSchema(body))
        if stats_key is not None:
            self.enf_branches[stats_key] = len(_branches_of(normalized))
        if s_props is not None and s_items is not None:
            result: Schema = all_of(
                (
                    push_uneval_props(
                        self.doc, s_props.value, normalized, self.analyzer
                    ),
                    push_uneval_items(
                        self.doc, s_items.value, normalized, self.analyzer
                    ),
                )
            )
        elif s_props is not None:
            result = push_uneval_props(
                self.doc, s_props.value, normalized, self.analyzer
            )
        else:
            assert s_items is not None
            result = push_uneval_items(
                self.doc, s_items.value, normalized, self.analyzer
            )
        if anchor is not None:
            assert isinstance(result, ObjSchema)
            result = ObjSchema((anchor,) + result.keywords)
        return result


def elim_schema(doc: SchemaDocument, s: Schema) -> Schema:
    """Rewrite one named schema; schemas without unevaluated* are unchanged."""
    return _ElimRun(doc).elim(s)


def elim_document(doc: SchemaDocument) -> SchemaDocument:
    """Rewrite a whole document into its annotation-independent equivalent."""
    result, _ = elim_document_with_stats(doc)
    return result


def elim_document_with_stats(
    doc: SchemaDocument,
) -> tuple[SchemaDocument, dict[str, int]]:
    cycle = find_unguarded_cycle(doc)
    if cycle is not None:
        raise GuardednessError(cycle)
    unnested = unnest(doc)
    run = _ElimRun(unnested)
    new_defs = {name: run.elim_named(name) for name in sorted(unnested.defs)}
    new_root = run.elim_named("")
    out = build_document(new_root, new_defs)
    if count_uneval_keywords(out) != 0:
        raise EliminationError("rewriting left unevaluated* keywords behind")
    return out, dict(run.enf_branches)
