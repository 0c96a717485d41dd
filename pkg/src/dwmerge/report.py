"""The merge report: count laws, correspondences, conflicts, pruning decisions.

Every successful merge produces one report. The two count laws

    rows:      merged = left + right - shared
    non-null:  merged = left + right + filled   (per completed attribute)

are not just reported: :func:`assert_count_laws` recomputes both sides and a
mismatch is a fatal internal error, never a warning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalInvariantError

FORMAT_VERSION = 1
TOOL_NAME = "dwmerge"


@dataclass(frozen=True)
class TableCount:
    table: str
    kind: str  # "dimension" | "fact"
    n_left: int | None
    n_right: int | None
    n_shared: int
    n_merged: int


@dataclass(frozen=True)
class CompletedAttribute:
    table: str
    attribute: str
    n_left: int | None  # non-null count in the left input, None when absent
    n_right: int | None
    n_filled: int
    n_merged: int


@dataclass(frozen=True)
class CorrespondenceEcho:
    left: str  # "table.attr"
    right: str
    unified: str
    score: float
    source: str


@dataclass(frozen=True)
class ConflictEcho:
    table: str
    key: str
    attribute: str
    left: str
    right: str
    chosen: str


@dataclass(frozen=True)
class AmbiguousFill:
    table: str
    key: str
    attribute: str
    donor: str


@dataclass(frozen=True)
class PrunedHierarchy:
    dimension: str
    hierarchy: str
    reason: str  # "noConformingInstance" | "subsumedByMerged"


@dataclass(frozen=True)
class DimensionPairEcho:
    left: str
    right: str
    merged: str


@dataclass
class MergeReport:
    result_kind: str  # "star" | "constellation"
    schema_name: str
    tool_version: str
    config: dict
    tables: list[TableCount] = field(default_factory=list)
    completions: list[CompletedAttribute] = field(default_factory=list)
    correspondences: list[CorrespondenceEcho] = field(default_factory=list)
    conflicts: list[ConflictEcho] = field(default_factory=list)
    ambiguous_fills: list[AmbiguousFill] = field(default_factory=list)
    pruned: list[PrunedHierarchy] = field(default_factory=list)
    dimension_pairs: list[DimensionPairEcho] = field(default_factory=list)


def assert_count_laws(report: MergeReport) -> None:
    """Recompute both count laws; raise on any mismatch."""
    for t in report.tables:
        expect = (t.n_left or 0) + (t.n_right or 0) - t.n_shared
        if t.n_merged != expect:
            raise InternalInvariantError(
                f"tuple count law broken for {t.table!r}: "
                f"{t.n_left} + {t.n_right} - {t.n_shared} != {t.n_merged}")
    for c in report.completions:
        expect = (c.n_left or 0) + (c.n_right or 0) + c.n_filled
        if c.n_merged != expect:
            raise InternalInvariantError(
                f"completion count law broken for {c.table}.{c.attribute}: "
                f"{c.n_left} + {c.n_right} + {c.n_filled} != {c.n_merged}")


def report_to_dict(report: MergeReport) -> dict:
    """Stable JSON-ready rendering; list order is already deterministic."""
    return {
        "formatVersion": FORMAT_VERSION,
        "tool": {"name": TOOL_NAME, "version": report.tool_version},
        "result": report.result_kind,
        "schemaName": report.schema_name,
        "config": report.config,
        "tables": [{
            "table": t.table, "kind": t.kind, "rowsLeft": t.n_left,
            "rowsRight": t.n_right, "rowsShared": t.n_shared, "rowsMerged": t.n_merged,
        } for t in report.tables],
        "completedAttributes": [{
            "table": c.table, "attribute": c.attribute, "nonNullLeft": c.n_left,
            "nonNullRight": c.n_right, "filled": c.n_filled, "nonNullMerged": c.n_merged,
        } for c in report.completions],
        "correspondences": [{
            "left": c.left, "right": c.right, "unified": c.unified,
            "score": c.score, "source": c.source,
        } for c in report.correspondences],
        "conflicts": [{
            "table": c.table, "key": c.key, "attribute": c.attribute,
            "left": c.left, "right": c.right, "chosen": c.chosen,
        } for c in report.conflicts],
        "ambiguousFills": [{
            "table": a.table, "key": a.key, "attribute": a.attribute, "donor": a.donor,
        } for a in report.ambiguous_fills],
        "prunedHierarchies": [{
            "dimension": p.dimension, "hierarchy": p.hierarchy, "reason": p.reason,
        } for p in report.pruned],
        "dimensionPairs": [{
            "left": p.left, "right": p.right, "merged": p.merged,
        } for p in report.dimension_pairs],
    }
