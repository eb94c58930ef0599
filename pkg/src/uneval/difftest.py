"""Differential equivalence testing: original vs. rewritten schema."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .eliminate import elim_document
from .instances import enumerate_instances
from .jsonvalue import JsonValue, serialize_json
from .schema import SchemaDocument, serialize_schema
from .validator import validate

MAX_RECORDED_DISAGREEMENTS = 25


@dataclass
class DiffReport:
    schema_id: str
    instances_total: int = 0
    agree: int = 0
    disagree: int = 0
    disagreements: list[dict] = field(default_factory=list)
    elapsed_ms: float = 0.0
    size_ratio: float = 0.0
    warning: str | None = None

    def to_json(self) -> dict:
        out = {
            "schema_id": self.schema_id,
            "instances_total": self.instances_total,
            "agree": self.agree,
            "disagree": self.disagree,
            "disagreements": self.disagreements,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "size_ratio": round(self.size_ratio, 4),
        }
        if self.warning:
            out["warning"] = self.warning
        return out


def difftest(
    doc: SchemaDocument,
    instances: Optional[Iterable[JsonValue]] = None,
    schema_id: str = "<schema>",
) -> DiffReport:
    """Rewrite the document and compare validation verdicts instance-wise.

    Without an explicit instance source the built-in exhaustive enumerator
    is used.  Annotation differences are irrelevant here: the rewritten
    schema is annotation-free by construction, only validity must agree.
    """
    started = time.perf_counter()
    rewritten = elim_document(doc)
    report = DiffReport(schema_id=schema_id)

    original_bytes = len(serialize_json(serialize_schema(doc)))
    rewritten_bytes = len(serialize_json(serialize_schema(rewritten)))
    report.size_ratio = rewritten_bytes / original_bytes if original_bytes else 0.0

    if instances is None:
        instances = enumerate_instances(doc)

    for instance in instances:
        report.instances_total += 1
        before = validate(doc, doc.root, instance).valid
        after = validate(rewritten, rewritten.root, instance).valid
        if before == after:
            report.agree += 1
        else:
            report.disagree += 1
            if len(report.disagreements) < MAX_RECORDED_DISAGREEMENTS:
                report.disagreements.append(
                    {
                        "instance": instance,
                        "valid_under_original": before,
                        "valid_under_rewritten": after,
                    }
                )
    if report.instances_total == 0:
        report.warning = "no instances supplied; nothing was compared"
    report.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return report
