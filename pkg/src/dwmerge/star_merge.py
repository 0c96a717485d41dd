"""Merging two star schemas end to end.

Phases: cross-enrich dimension pairs with unmatched roots, pair and merge
dimensions with matched roots, prune dead or subsumed hierarchies, then
merge the facts into a star when every dimension found a matched-root
partner, or assemble a constellation otherwise. The resulting report is
checked against the count laws before anything is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import __version__
from .config import MergeSettings
from .dimension_merge import (CompletionFill, DimensionMergeResult, ValueConflict,
                              _uniquify, merge_dimensions)
from .errors import (ConflictError, InternalInvariantError, MergeError,
                     UnmergeableError)
from .matching import (Correspondence, MatcherConfig, match_attributes,
                       match_measures, matched_root_parameters)
from .model import (Constellation, Dimension, Fact, Hierarchy, Row, StarSchema,
                    cell_sort_key, cell_to_text, cells_equal, conforms, validate)
from .report import (AmbiguousFill, CompletedAttribute, ConflictEcho,
                     CorrespondenceEcho, DimensionPairEcho, MergeReport,
                     PrunedHierarchy, TableCount, assert_count_laws)

REASON_DEAD = "noConformingInstance"
REASON_SUBSUMED = "subsumedByMerged"


@dataclass
class StarMergeResult:
    schema: StarSchema | Constellation
    report: MergeReport
    pruned: list[PrunedHierarchy] = field(default_factory=list)


# ---------------------------------------------------------------------------
# hierarchy pruning
# ---------------------------------------------------------------------------

def prune_hierarchies(dim: Dimension, original_seqs: set[tuple[str, ...]],
                      merged_seqs: set[tuple[str, ...]] | None = None
                      ) -> tuple[Dimension, list[tuple[Hierarchy, str]]]:
    """Delete hierarchies no instance conforms to, and originals whose
    conforming instances all conform to a merged superset hierarchy.

    ``original_seqs`` are the parameter sequences of the hierarchies the raw
    inputs carried; ``merged_seqs`` the merge-produced ones. A sequence can
    be in both: a merge that reproduces an input hierarchy still counts as
    merged for the subsumption rule. Decisions are evaluated against the
    incoming hierarchy set and applied in one batch, so the outcome does not
    depend on iteration order.
    """
    if merged_seqs is None:
        merged_seqs = {h.parameters for h in dim.hierarchies} - original_seqs
    rows = list(dim.rows.values())
    conformers = {h.name: [i for i, r in enumerate(rows) if conforms(r, h)]
                  for h in dim.hierarchies}
    merged = [h for h in dim.hierarchies if h.parameters in merged_seqs]

    removed: list[tuple[Hierarchy, str]] = []
    for h in dim.hierarchies:
        rows_on_h = conformers[h.name]
        if not rows_on_h:
            removed.append((h, REASON_DEAD))
            continue
        if h.parameters not in original_seqs:
            continue
        supersets = [m for m in merged
                     if set(m.parameters) >= set(h.parameters)
                     and m.parameters != h.parameters]
        if not supersets:
            continue
        covering = set()
        for m in supersets:
            covering.update(conformers[m.name])
        if all(i in covering for i in rows_on_h):
            removed.append((h, REASON_SUBSUMED))

    gone = {h.name for h, _ in removed}
    pruned_dim = Dimension(dim.name, dim.root, dim.attributes,
                           tuple(h for h in dim.hierarchies if h.name not in gone),
                           dim.rows, dim.numeric)
    return pruned_dim, removed


# ---------------------------------------------------------------------------
# fact merging
# ---------------------------------------------------------------------------

def merge_facts(f1: Fact, f2: Fact, measure_corrs: Sequence[Correspondence],
                dim_pairing: Mapping[str, str], settings: MergeSettings = MergeSettings()
                ) -> tuple[Fact, list[ValueConflict], int]:
    """Fuse two facts row-wise on their aligned dimension-key tuples.

    ``dim_pairing`` maps each right dimension name to its matched left
    dimension. Key columns keep the left fact's spelling and order; matched
    measures unify under the left name, the rest join with nulls on the
    side that lacks them.
    """
    left_cols = {dim: col for dim, col in f1.dimension_keys}
    right_cols = {dim: col for dim, col in f2.dimension_keys}
    right_dim_for_left = {l: r for r, l in dim_pairing.items()}
    aligned_right_cols = []
    for dim, col in f1.dimension_keys:
        rdim = right_dim_for_left.get(dim)
        if rdim is None or rdim not in right_cols:
            raise MergeError(
                f"fact key misalignment: no key column of {f2.name!r} pairs with "
                f"{f1.name!r} column {col!r} (dimension {dim!r})")
        aligned_right_cols.append(right_cols[rdim])
    if len(f2.dimension_keys) != len(f1.dimension_keys):
        extra = [c for d, c in f2.dimension_keys
                 if dim_pairing.get(d) not in left_cols]
        raise MergeError(f"fact key misalignment: unpaired key columns {extra!r}")

    m_l2r = {c.left[1]: c.right[1] for c in measure_corrs}
    m_r2l = {v: k for k, v in m_l2r.items()}
    taken = set(f1.measures) | set(f1.key_columns())
    right_measure_names: dict[str, str] = {}
    new_measures: list[str] = []
    for m in f2.measures:
        if m in m_r2l:
            right_measure_names[m] = m_r2l[m]
        else:
            name = m if m not in taken else _uniquify(f"{f2.name}_{m}", taken)
            taken.add(name)
            right_measure_names[m] = name
            new_measures.append(name)
    measures = f1.measures + tuple(new_measures)
    numeric = set(f1.numeric)
    for m in f2.measures:
        if m in f2.numeric:
            numeric.add(right_measure_names[m])

    key_cols = f1.key_columns()
    rows: dict[tuple, Row] = {}
    for r in f1.rows:
        key = tuple(r[c] for c in key_cols)
        row: Row = {c: v for c, v in zip(key_cols, key)}
        for m in f1.measures:
            row[m] = r.get(m)
        for m in new_measures:
            row[m] = None
        rows[key] = row
    conflicts: list[ValueConflict] = []
    n_common = 0
    for r in f2.rows:
        key = tuple(r[c] for c in aligned_right_cols)
        row = rows.get(key)
        if row is None:
            row = {c: v for c, v in zip(key_cols, key)}
            for m in measures:
                row[m] = None
            rows[key] = row
        else:
            n_common += 1
        for m in f2.measures:
            v2 = r.get(m)
            if v2 is None:
                continue
            name = right_measure_names[m]
            v1 = row.get(name)
            if v1 is None:
                row[name] = v2
            elif not cells_equal(v1, v2):
                if settings.conflict == "error":
                    raise ConflictError(
                        f"conflicting measure {name!r} for fact key {key!r}")
                chosen = v1 if settings.conflict == "left" else v2
                row[name] = chosen
                key_text = "(" + ", ".join(cell_to_text(c) for c in key) + ")"
                conflicts.append(ValueConflict(key_text, name, v1, v2, chosen))

    ordered = [rows[k] for k in sorted(rows, key=lambda t: tuple(cell_sort_key(c) for c in t))]
    merged = Fact(f1.name, measures, f1.dimension_keys, ordered, frozenset(numeric))
    return merged, conflicts, n_common


# ---------------------------------------------------------------------------
# star merging
# ---------------------------------------------------------------------------

def _non_null_count(rows, attr: str) -> int:
    return sum(1 for r in rows if r.get(attr) is not None)


def merge_all_dimensions(s1: StarSchema, s2: StarSchema, matcher: MatcherConfig,
                         settings: MergeSettings = MergeSettings()):
    """Enrich unmatched-root pairs, then merge every matched-root pair.

    Returns a working structure consumed by :func:`merge_stars`; use that
    entry point unless you need the intermediate pieces.
    """
    dims1 = {d.name: d for d in s1.dimensions}
    dims2 = {d.name: d for d in s2.dimensions}
    enrich_fills_1: dict[str, list[CompletionFill]] = {n: [] for n in dims1}
    enrich_fills_2: dict[str, list[CompletionFill]] = {n: [] for n in dims2}
    enrich_merged_1: dict[str, list[Hierarchy]] = {n: [] for n in dims1}
    enrich_merged_2: dict[str, list[Hierarchy]] = {n: [] for n in dims2}
    all_corrs: list[Correspondence] = []

    # Phase 1: cross-enrichment of pairs whose roots do not match.
    for n1 in sorted(dims1):
        for n2 in sorted(dims2):
            corrs = match_attributes(dims1[n1], dims2[n2], matcher)
            if not corrs or matched_root_parameters(dims1[n1], dims2[n2], corrs):
                continue
            res = merge_dimensions(dims1[n1], dims2[n2], corrs, settings)
            dims1[n1] = res.left
            dims2[n2] = res.right
            enrich_fills_1[n1].extend(res.completion_log_left)
            enrich_fills_2[n2].extend(res.completion_log_right)
            enrich_merged_1[n1].extend(res.merged_only_left)
            enrich_merged_2[n2].extend(res.merged_only_right)
            all_corrs.extend(corrs)

    # Phase 2: pair matched-root dimensions (most correspondences first).
    candidates = []
    pair_corrs: dict[tuple[str, str], list[Correspondence]] = {}
    for n1 in sorted(dims1):
        for n2 in sorted(dims2):
            corrs = match_attributes(dims1[n1], dims2[n2], matcher)
            pair_corrs[(n1, n2)] = corrs
            if corrs and matched_root_parameters(dims1[n1], dims2[n2], corrs):
                candidates.append((-len(corrs), n1, n2))
    used1: set[str] = set()
    used2: set[str] = set()
    pairing: list[tuple[str, str]] = []
    for _, n1, n2 in sorted(candidates):
        if n1 in used1 or n2 in used2:
            continue
        used1.add(n1)
        used2.add(n2)
        pairing.append((n1, n2))
    if not pairing:
        raise UnmergeableError(
            f"stars {s1.name!r} and {s2.name!r} share no dimensions with matched "
            "root parameters")

    merged: list[tuple[str, str, DimensionMergeResult]] = []
    for n1, n2 in sorted(pairing):
        res = merge_dimensions(dims1[n1], dims2[n2], pair_corrs[(n1, n2)], settings)
        merged.append((n1, n2, res))
        all_corrs.extend(pair_corrs[(n1, n2)])

    leftovers_1 = [dims1[n] for n in sorted(dims1) if n not in used1]
    leftovers_2 = [dims2[n] for n in sorted(dims2) if n not in used2]
    return (merged, leftovers_1, leftovers_2, enrich_fills_1, enrich_fills_2,
            enrich_merged_1, enrich_merged_2, all_corrs)


def merge_stars(s1: StarSchema, s2: StarSchema, matcher: MatcherConfig = MatcherConfig(),
                settings: MergeSettings = MergeSettings(),
                config_echo: dict | None = None) -> StarMergeResult:
    """Merge two star schemas into a star or a constellation, with report."""
    (merged, leftovers_1, leftovers_2, enrich_fills_1, enrich_fills_2,
     enrich_merged_1, enrich_merged_2, all_corrs) = merge_all_dimensions(
        s1, s2, matcher, settings)

    report = MergeReport(result_kind="", schema_name="", tool_version=__version__,
                         config=dict(config_echo or {}))
    out_name = f"{s1.name}_{s2.name}"

    # Final dimension set; rename clashes among unpaired right-side dimensions.
    final_dims: list[Dimension] = []
    merged_names: dict[str, str] = {}  # right dim -> final merged name
    originals_for: dict[str, set[tuple[str, ...]]] = {}
    merged_for: dict[str, set[tuple[str, ...]]] = {}
    fills_for: dict[str, list[tuple[str, CompletionFill]]] = {}
    n_counts: dict[str, TableCount] = {}

    for n1, n2, res in merged:
        dim = res.dimension
        final_dims.append(dim)
        merged_names[n2] = dim.name
        report.dimension_pairs.append(DimensionPairEcho(n1, n2, dim.name))
        orig1 = s1.dimension(n1)
        orig2 = s2.dimension(n2)
        right_raw_to_unified = {src[1]: a for a, src in res.attr_sources.items()
                                if src[1] is not None}
        seqs = {h.parameters for h in orig1.hierarchies}
        for h in orig2.hierarchies:
            seqs.add(tuple(right_raw_to_unified.get(p, p) for p in h.parameters))
        originals_for[dim.name] = seqs
        produced = {h.parameters for h in res.merged_only}
        produced.update(h.parameters for h in enrich_merged_1[n1])
        for h in enrich_merged_2[n2]:
            produced.add(tuple(right_raw_to_unified.get(p, p) for p in h.parameters))
        merged_for[dim.name] = produced
        fills: list[tuple[str, CompletionFill]] = []
        for f in enrich_fills_1[n1]:
            fills.append((f.attribute, f))
        for f in enrich_fills_2[n2]:
            fills.append((right_raw_to_unified.get(f.attribute, f.attribute), f))
        for f in res.completion_log:
            fills.append((f.attribute, f))
        fills_for[dim.name] = fills
        n_counts[("dimension", dim.name)] = TableCount(
            dim.name, "dimension", len(orig1.rows), len(orig2.rows),
            res.shared_keys, len(dim.rows))
        for c in res.conflict_log:
            report.conflicts.append(ConflictEcho(dim.name, cell_to_text(c.row_key),
                                                 c.attribute, cell_to_text(c.left),
                                                 cell_to_text(c.right), cell_to_text(c.chosen)))
        _echo_completions(report, dim, orig1, orig2, res.attr_sources, fills)

    rename_2: dict[str, str] = {}
    taken_names = {d.name for d in final_dims} | {d.name for d in leftovers_1}
    for d in leftovers_2:
        new = d.name if d.name not in taken_names else _uniquify(f"{d.name}_2", taken_names)
        taken_names.add(new)
        rename_2[d.name] = new

    for side, leftovers, enrich_fills, enrich_merged, orig_star in (
            ("left", leftovers_1, enrich_fills_1, enrich_merged_1, s1),
            ("right", leftovers_2, enrich_fills_2, enrich_merged_2, s2)):
        for d in leftovers:
            name = rename_2.get(d.name, d.name) if side == "right" else d.name
            dim = Dimension(name, d.root, d.attributes, d.hierarchies, d.rows, d.numeric)
            final_dims.append(dim)
            orig = orig_star.dimension(d.name)
            originals_for[name] = {h.parameters for h in orig.hierarchies}
            merged_for[name] = {h.parameters for h in enrich_merged[d.name]}
            fills = [(f.attribute, f) for f in enrich_fills[d.name]]
            fills_for[name] = fills
            n_counts[("dimension", name)] = TableCount(
                name, "dimension",
                len(orig.rows) if side == "left" else None,
                len(orig.rows) if side == "right" else None,
                0, len(dim.rows))
            _echo_leftover_completions(report, dim, orig, side, fills)

    # Phase 3: pruning.
    pruned_records: list[PrunedHierarchy] = []
    if settings.prune:
        pruned_dims = []
        for dim in final_dims:
            pdim, removed = prune_hierarchies(dim, originals_for[dim.name],
                                              merged_for[dim.name])
            pruned_dims.append(pdim)
            for h, reason in removed:
                pruned_records.append(PrunedHierarchy(dim.name, h.name, reason))
        final_dims = pruned_dims
    report.pruned = pruned_records

    # Ambiguous fills and correspondences echo.
    for table, fills in sorted(fills_for.items()):
        for attr, f in fills:
            if f.ambiguous:
                report.ambiguous_fills.append(AmbiguousFill(
                    table, cell_to_text(f.row_key), attr, cell_to_text(f.donor_key)))
    for c in sorted(all_corrs, key=lambda c: (c.left, c.right)):
        report.correspondences.append(CorrespondenceEcho(
            f"{c.left[0]}.{c.left[1]}", f"{c.right[0]}.{c.right[1]}",
            c.left[1], c.score, c.source))

    # Phase 4: facts.
    star_case = (len(s1.dimensions) == len(s2.dimensions)
                 and not leftovers_1 and not leftovers_2)
    if star_case:
        measure_corrs = match_measures(s1.fact, s2.fact, matcher)
        dim_pairing = {n2: n1 for n1, n2, _ in merged}
        fact, fact_conflicts, n_common = merge_facts(
            s1.fact, s2.fact, measure_corrs, dim_pairing, settings)
        for c in sorted(measure_corrs, key=lambda c: (c.left, c.right)):
            report.correspondences.append(CorrespondenceEcho(
                f"{c.left[0]}.{c.left[1]}", f"{c.right[0]}.{c.right[1]}",
                c.left[1], c.score, c.source))
        for c in fact_conflicts:
            report.conflicts.append(ConflictEcho(fact.name, cell_to_text(c.row_key),
                                                 c.attribute, cell_to_text(c.left),
                                                 cell_to_text(c.right), cell_to_text(c.chosen)))
        n_counts[("fact", fact.name)] = TableCount(
            fact.name, "fact", len(s1.fact.rows), len(s2.fact.rows),
            n_common, len(fact.rows))
        schema: StarSchema | Constellation = StarSchema(out_name, fact, tuple(final_dims))
        report.result_kind = "star"
    else:
        fact_names: set[str] = set()
        f1 = _retarget_fact(s1.fact, {}, fact_names)
        remap2 = dict(merged_names)
        remap2.update(rename_2)
        f2 = _retarget_fact(s2.fact, remap2, fact_names)
        star_map = {
            f1.name: tuple(dim for dim, _ in f1.dimension_keys),
            f2.name: tuple(dim for dim, _ in f2.dimension_keys),
        }
        n_counts[("fact", f1.name)] = TableCount(f1.name, "fact", len(f1.rows),
                                                 None, 0, len(f1.rows))
        n_counts[("fact", f2.name)] = TableCount(f2.name, "fact", None,
                                                 len(f2.rows), 0, len(f2.rows))
        schema = Constellation(out_name, (f1, f2), tuple(final_dims), star_map)
        report.result_kind = "constellation"

    report.schema_name = out_name
    report.tables = [n_counts[k] for k in sorted(n_counts)]
    report.completions.sort(key=lambda c: (c.table, c.attribute))
    assert_count_laws(report)
    violations = validate(schema)
    if violations:
        raise InternalInvariantError(
            "merged schema failed validation: " + "; ".join(str(v) for v in violations[:5]))
    return StarMergeResult(schema=schema, report=report, pruned=pruned_records)


def _retarget_fact(fact: Fact, dim_rename: Mapping[str, str], taken: set[str]) -> Fact:
    """Point an untouched fact at the merged dimension names; rows stay as-is."""
    name = _uniquify(fact.name, taken) if fact.name in taken else fact.name
    taken.add(name)
    keys = tuple((dim_rename.get(d, d), c) for d, c in fact.dimension_keys)
    return Fact(name, fact.measures, keys, fact.rows, fact.numeric)


def _echo_completions(report: MergeReport, dim: Dimension, orig1: Dimension,
                      orig2: Dimension,
                      attr_sources: Mapping[str, tuple[str | None, str | None]],
                      fills: list[tuple[str, CompletionFill]]) -> None:
    """Completion count entries for a merged dimension.

    Entries are emitted for attributes absent from at least one input, the
    only case where the completion law is well defined; fills on attributes
    both inputs carried stay visible through the ambiguous/conflict logs.
    """
    filled: dict[str, int] = {}
    for attr, _ in fills:
        filled[attr] = filled.get(attr, 0) + 1
    for attr in dim.attributes:
        n_fill = filled.get(attr, 0)
        if n_fill == 0:
            continue
        left_raw, right_raw = attr_sources.get(attr, (None, None))
        in1 = left_raw is not None and left_raw in orig1.attributes
        in2 = right_raw is not None and right_raw in orig2.attributes
        if in1 and in2:
            continue
        n1 = _non_null_count(orig1.rows.values(), left_raw) if in1 else None
        n2 = _non_null_count(orig2.rows.values(), right_raw) if in2 else None
        report.completions.append(CompletedAttribute(
            dim.name, attr, n1, n2, n_fill,
            _non_null_count(dim.rows.values(), attr)))


def _echo_leftover_completions(report: MergeReport, dim: Dimension, orig: Dimension,
                               side: str, fills: list[tuple[str, CompletionFill]]) -> None:
    filled: dict[str, int] = {}
    for attr, _ in fills:
        filled[attr] = filled.get(attr, 0) + 1
    for attr in dim.attributes:
        n_fill = filled.get(attr, 0)
        if n_fill == 0:
            continue
        n_own = _non_null_count(orig.rows.values(), attr) if attr in orig.attributes else None
        n1, n2 = (n_own, None) if side == "left" else (None, n_own)
        report.completions.append(CompletedAttribute(
            dim.name, attr, n1, n2, n_fill,
            _non_null_count(dim.rows.values(), attr)))
