"""Annotation-aware JSON Schema validation and unevaluated* elimination."""

from .analysis import (
    Analyzer,
    EvalPair,
    PatternSet,
    covers_check,
    eq_pairs,
    eq_patterns,
    ex_ei,
    ex_ep,
    exact_pattern,
    max_ei,
    max_ep,
    min_ei,
    min_ep,
)
from .difftest import DiffReport, difftest
from .eliminate import (
    count_uneval_keywords,
    elim_document,
    elim_document_with_stats,
    elim_schema,
    is_uneval_schema,
    p_props,
    pref_its,
    push_uneval_items,
    push_uneval_props,
    unnest,
)
from .enf import BranchList, EnfBuilder, and_combine, close, conjoin, dedup, enf, or_combine
from .errors import (
    DuplicateKeyError,
    EliminationError,
    GuardednessError,
    JsonParseError,
    RefResolutionError,
    SchemaParseError,
    UnevalError,
)
from .families import gen_family_san, gen_family_sn
from .instances import enumerate_instances, oracle_names, relevant_size
from .jsonvalue import (
    JsonValue,
    dump_json,
    format_number,
    json_equal,
    parse_json,
    serialize_json,
    type_of,
)
from .schema import (
    INF,
    BoolSchema,
    Keyword,
    ObjSchema,
    Schema,
    SchemaDocument,
    boolean_one_of,
    build_document,
    canonical_text,
    check_guarded,
    deref,
    find_unguarded_cycle,
    in_place_depth,
    parse_schema,
    schema_to_json,
    serialize_schema,
)
from .validator import (
    Annotation,
    ValidationOutcome,
    validate,
    validate_dependent,
    validate_document,
    validate_keyword,
    validate_keyword_list,
)
from .cli import main, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
