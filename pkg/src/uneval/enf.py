"""Evaluation normal form.

A schema in evaluation normal form is a single ``anyOf`` whose branch
list is *cover-closed* (every pair of branches has a branch evaluating at
least as much as both, on instances satisfying both) and in which every
branch is statically characterized.  Such a disjunction is the shape
through which ``unevaluated*`` keywords can be pushed soundly.

Normalization only ever expands boolean applicators and references, so
guarded recursion makes it terminate; conjunctions are flattened and
lists deduplicated, which keeps the output within a ``2^n`` envelope in
the number of distinct subschemas.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from .analysis import Analyzer
from .errors import EliminationError, GuardednessError
from .schema import (
    ADK_NAMES,
    BoolSchema,
    Keyword,
    ObjSchema,
    Schema,
    SchemaDocument,
    TRUE_SCHEMA,
    all_of,
    any_of,
    canonical_text,
    deref,
    not_,
)


def _conjunct_atoms(s: Schema) -> list[Schema]:
    """Splice single-keyword allOf schemas; anything else is an atom."""
    if isinstance(s, ObjSchema):
        kw = s.single_keyword("allOf")
        if kw is not None:
            return list(kw.value)
    return [s]


def conjoin(s1: Schema, s2: Schema) -> Schema:
    """allOf of two schemas, flattened and deduplicated.

    ``true`` conjuncts are dropped; a conjunction that collapses to a
    single atom is returned bare.
    """
    atoms: list[Schema] = []
    seen: set[str] = set()
    for s in (*_conjunct_atoms(s1), *_conjunct_atoms(s2)):
        if isinstance(s, BoolSchema) and s.value:
            continue
        key = canonical_text(s)
        if key not in seen:
            seen.add(key)
            atoms.append(s)
    if not atoms:
        return TRUE_SCHEMA
    if len(atoms) == 1:
        return atoms[0]
    return all_of(atoms)


def branch_key(s: Schema) -> str:
    """Canonical identity of a branch; conjunctions compare order-insensitively."""
    atoms = _conjunct_atoms(s)
    if len(atoms) == 1:
        return canonical_text(s)
    return "allOf:" + ",".join(sorted(set(canonical_text(a) for a in atoms)))


def dedup(branches: Iterable[Schema]) -> list[Schema]:
    """Drop branches whose canonical form already occurred (first one wins)."""
    out: list[Schema] = []
    seen: set[str] = set()
    for s in branches:
        key = branch_key(s)
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


class BranchList:
    """Ordered, duplicate-free list of branches."""

    __slots__ = ("branches", "_seen")

    def __init__(self, branches: Iterable[Schema] = ()):
        self.branches: list[Schema] = []
        self._seen: set[str] = set()
        for s in branches:
            self.add(s)

    def add(self, s: Schema) -> None:
        key = branch_key(s)
        if key not in self._seen:
            self._seen.add(key)
            self.branches.append(s)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)


def and_combine(lists: Iterable[Iterable[Schema]]) -> BranchList:
    """Cartesian conjunction of branch lists; the empty product is [true]."""
    lists = [list(branches) for branches in lists]
    if not lists:
        return BranchList([TRUE_SCHEMA])
    rest = and_combine(lists[1:])
    out = BranchList()
    for left in lists[0]:
        for right in rest:
            out.add(conjoin(left, right))
    return out


def close(
    doc: SchemaDocument,
    l1: Iterable[Schema],
    l2: Iterable[Schema],
    analyzer: Optional[Analyzer] = None,
) -> BranchList:
    """Conjunctions needed so that l1 ++ l2 ++ close(l1, l2) is cover-closed.

    A cross pair is omitted when one of its two endpoints provably covers
    it; no third-schema search is attempted.
    """
    an = analyzer or Analyzer(doc)
    out = BranchList()
    for s1 in l1:
        for s2 in l2:
            if an.covers(s1, s2) or an.covers(s2, s1):
                continue
            out.add(conjoin(s1, s2))
    return out


def or_combine(
    doc: SchemaDocument,
    lists: Iterable[Iterable[Schema]],
    analyzer: Optional[Analyzer] = None,
) -> BranchList:
    """Concatenation of branch lists, completed by close insertions."""
    an = analyzer or Analyzer(doc)
    lists = [list(branches) for branches in lists]
    if not lists:
        return BranchList()
    rest = or_combine(doc, lists[1:], an)
    out = BranchList(lists[0])
    for s in rest:
        out.add(s)
    for s in close(doc, lists[0], rest.branches, an):
        out.add(s)
    return out


class EnfBuilder:
    """Normalization over one document.

    ``resolve_ref`` lets the caller substitute a reference target before
    recursion (the eliminator maps references to uneval-schemas onto their
    rewritten form).  Reference normalizations are memoized per URI.
    """

    def __init__(
        self,
        doc: SchemaDocument,
        analyzer: Optional[Analyzer] = None,
        resolve_ref: Optional[Callable[[str], Schema]] = None,
    ):
        self.doc = doc
        self.analyzer = analyzer or Analyzer(doc)
        self._resolve_ref = resolve_ref or (lambda uri: deref(doc, uri))
        self._ref_memo: dict[str, list[Schema]] = {}
        self._ref_in_progress: set[str] = set()
        self.max_depth = 0

    def enf(self, s: Schema) -> ObjSchema:
        return any_of(self.branch_list(s, 0))

    def branch_list(self, s: Schema, depth: int) -> list[Schema]:
        self.max_depth = max(self.max_depth, depth)
        if isinstance(s, ObjSchema):
            adk = [kw.name for kw in s.keywords if kw.name in ADK_NAMES]
            if adk:
                raise EliminationError(
                    f"normalization applied to a schema still carrying {adk}"
                )
        if self.analyzer.is_characterized(s):
            if isinstance(s, ObjSchema):
                kw = s.single_keyword("anyOf")
                if kw is not None:
                    return dedup(kw.value)
            return [s]
        assert isinstance(s, ObjSchema)  # booleans are always characterized
        # a top-level $anchor of an inlined definition must not be copied
        # into the expansion branches; the definition itself keeps it
        keywords = tuple(kw for kw in s.keywords if kw.name != "$anchor")
        groups = _dependency_groups(keywords)
        if len(groups) > 1:
            parts = [self.branch_list(ObjSchema(g), depth + 1) for g in groups]
            return and_combine(parts).branches
        kw = groups[0][0] if len(groups) == 1 and len(groups[0]) == 1 else None
        if kw is None:
            # a single multi-keyword dependency group is structural, hence
            # characterized, hence never reaches this point
            raise EliminationError("uncharacterized structural keyword group")
        if kw.name == "allOf":
            parts = [self.branch_list(b, depth + 1) for b in kw.value]
            return and_combine(parts).branches
        if kw.name == "anyOf":
            parts = [self.branch_list(b, depth + 1) for b in kw.value]
            return or_combine(self.doc, parts, self.analyzer).branches
        if kw.name == "oneOf":
            args = list(kw.value)
            out = BranchList()
            for i, arg in enumerate(args):
                product = all_of(
                    tuple(
                        args[j] if j == i else not_(args[j])
                        for j in range(len(args))
                    )
                )
                for branch in self.branch_list(product, depth + 1):
                    out.add(branch)
            return out.branches
        if kw.name == "$ref":
            memo = self._ref_memo.get(kw.value)
            if memo is not None:
                return memo
            if kw.value in self._ref_in_progress:
                raise GuardednessError([kw.value, "..."])
            self._ref_in_progress.add(kw.value)
            try:
                target = self._resolve_ref(kw.value)
                result = self.branch_list(target, depth + 1)
            finally:
                self._ref_in_progress.discard(kw.value)
            self._ref_memo[kw.value] = result
            return result
        raise EliminationError(
            f"schema with single keyword {kw.name!r} is unexpectedly uncharacterized"
        )


def _dependency_groups(keywords: tuple[Keyword, ...]) -> list[tuple[Keyword, ...]]:
    """Split a keyword list into independently evaluable units.

    Keywords that read their neighbours stay with them: the contains
    triple is one unit, ``additionalProperties`` keeps its adjacent
    properties/patternProperties, ``items`` keeps its adjacent
    prefixItems.  Everything else forms its own unit.
    """
    names = {kw.name for kw in keywords}
    prop_group_names = (
        {"properties", "patternProperties", "additionalProperties"}
        if "additionalProperties" in names
        else set()
    )
    item_group_names = {"prefixItems", "items"} if "items" in names else set()
    contains_group_names = (
        {"contains", "minContains", "maxContains"} if "contains" in names else set()
    )

    groups: list[tuple[Keyword, ...]] = []
    buckets: dict[str, list[Keyword]] = {"prop": [], "item": [], "contains": []}
    placed: dict[str, bool] = {"prop": False, "item": False, "contains": False}

    def bucket_of(name: str) -> str | None:
        if name in prop_group_names:
            return "prop"
        if name in item_group_names:
            return "item"
        if name in contains_group_names:
            return "contains"
        return None

    order: list[tuple[str, object]] = []
    for kw in keywords:
        b = bucket_of(kw.name)
        if b is None:
            order.append(("single", kw))
        else:
            buckets[b].append(kw)
            if not placed[b]:
                placed[b] = True
                order.append(("bucket", b))
    for kind, payload in order:
        if kind == "single":
            groups.append((payload,))
        else:
            groups.append(tuple(buckets[payload]))
    return groups


def enf(doc: SchemaDocument, s: Schema) -> ObjSchema:
    """Rewrite a schema into an equivalent single-anyOf normal form."""
    return EnfBuilder(doc).enf(s)
