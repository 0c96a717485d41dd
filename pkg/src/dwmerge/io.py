"""Bit-exact ingestion and emission of warehouse directories and reports.

Directory layout
----------------
A warehouse directory holds ``schema.json`` plus one CSV per table. The
descriptor is a JSON document::

    {
      "formatVersion": 1,
      "name": "dw1",
      "facts": [
        {"name": "sales", "table": "sales.csv",
         "measures": ["quantity", "price"],
         "textMeasures": [],
         "dimensionKeys": [{"dimension": "customer", "column": "customer_id"}]}
      ],
      "dimensions": [
        {"name": "customer", "table": "customer.csv", "id": "customer_id",
         "attributes": ["customer_id", "city", "nation"],
         "numericAttributes": [],
         "hierarchies": [
           {"name": "geo", "parameters": ["customer_id", "city", "nation"]}]}
      ],
      "star": {"sales": ["customer"]}
    }

``star`` may be omitted for a single fact (it then links every dimension).
A single-fact document loads as a star schema, several facts load as a
constellation.

CSV rules
---------
UTF-8, comma separated, RFC 4180 quoting, first line is the header. An
empty field is null; whitespace-only fields trim to empty and are therefore
null too; the literal text ``NULL`` is ordinary data. Values in columns
tagged numeric (``numericAttributes``; measures unless listed in
``textMeasures``; fact key columns follow the referenced dimension id) are
parsed as exact decimals, everything else stays text.

User correspondence files
-------------------------
One entry per line, ``#`` comments and blank lines ignored::

    pair   leftTable.attribute  rightTable.attribute
    forbid leftTable.attribute  rightTable.attribute

Tables are dimension or fact names; the attribute part is everything after
the first dot.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .errors import LoadError
from .model import (Cell, Constellation, Dimension, Fact, Hierarchy, Row, Schema,
                    StarSchema, cell_sort_key, cell_to_text)
from .report import MergeReport, report_to_dict

logger = logging.getLogger(__name__)

DESCRIPTOR_NAME = "schema.json"
FORMAT_VERSION = 1


def parse_cell(text: str, numeric: bool, *, path: str, line: int) -> Cell:
    value = text.strip()
    if not value:
        return None
    if not numeric:
        return value
    try:
        return Decimal(value)
    except InvalidOperation:
        raise LoadError(f"{value!r} is not a number", path=path, line=line) from None


def _read_csv(path: Path, columns: list[str], numeric: set[str]) -> list[Row]:
    try:
        handle = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise LoadError(f"cannot read table: {exc}", path=str(path)) from exc
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError("table file is empty, header expected", path=str(path), line=1)
        missing = [c for c in columns if c not in header]
        if missing:
            raise LoadError(f"header is missing declared columns {missing!r}",
                            path=str(path), line=1)
        rows: list[Row] = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise LoadError(
                    f"row has {len(record)} fields, header has {len(header)}",
                    path=str(path), line=lineno)
            cells = {name: parse_cell(value, name in numeric, path=str(path), line=lineno)
                     for name, value in zip(header, record)}
            rows.append({c: cells.get(c) for c in columns})
        return rows


def _descriptor_field(obj: dict, key: str, kind, *, path: str, where: str):
    if key not in obj:
        raise LoadError(f"{where}: missing field {key!r}", path=path)
    value = obj[key]
    if not isinstance(value, kind):
        raise LoadError(f"{where}: field {key!r} has the wrong type", path=path)
    return value


def _load_dimension(entry: dict, directory: Path, strict: bool, path: str) -> Dimension:
    name = _descriptor_field(entry, "name", str, path=path, where="dimension")
    where = f"dimension {name!r}"
    table = _descriptor_field(entry, "table", str, path=path, where=where)
    root = _descriptor_field(entry, "id", str, path=path, where=where)
    attributes = tuple(_descriptor_field(entry, "attributes", list, path=path, where=where))
    numeric = frozenset(entry.get("numericAttributes", []))
    if root not in attributes:
        raise LoadError(f"{where}: id {root!r} is not in its attributes", path=path)
    unknown_numeric = numeric - set(attributes)
    if unknown_numeric:
        raise LoadError(f"{where}: numericAttributes {sorted(unknown_numeric)!r} "
                        "are not declared attributes", path=path)
    hierarchies = []
    for h in entry.get("hierarchies", []):
        hname = _descriptor_field(h, "name", str, path=path, where=f"{where} hierarchy")
        params = tuple(_descriptor_field(h, "parameters", list, path=path,
                                         where=f"{where} hierarchy {hname!r}"))
        bad = [p for p in params if p not in attributes]
        if bad:
            raise LoadError(f"{where} hierarchy {hname!r}: parameters {bad!r} "
                            "are not declared attributes", path=path)
        if params[0] != root:
            raise LoadError(f"{where} hierarchy {hname!r}: first parameter must be "
                            f"the id {root!r}", path=path)
        hierarchies.append(Hierarchy(hname, params))

    table_path = directory / table
    raw_rows = _read_csv(table_path, list(attributes), set(numeric))
    rows: dict[Cell, Row] = {}
    for lineno, row in enumerate(raw_rows, start=2):
        key = row.get(root)
        if key is None:
            raise LoadError(f"dimension {name!r}: null id value", path=str(table_path),
                            line=lineno)
        if key in rows:
            if strict:
                raise LoadError(f"dimension {name!r}: duplicate id {cell_to_text(key)!r}",
                                path=str(table_path), line=lineno)
            logger.warning("dimension %s: duplicate id %s at %s:%d, keeping the first row",
                           name, cell_to_text(key), table_path, lineno)
            continue
        rows[key] = row
    return Dimension(name, root, attributes, tuple(hierarchies), rows, numeric)


def _load_fact(entry: dict, directory: Path, dims: dict[str, Dimension],
               strict: bool, path: str) -> Fact:
    name = _descriptor_field(entry, "name", str, path=path, where="fact")
    where = f"fact {name!r}"
    table = _descriptor_field(entry, "table", str, path=path, where=where)
    measures = tuple(_descriptor_field(entry, "measures", list, path=path, where=where))
    text_measures = set(entry.get("textMeasures", []))
    keys = []
    for k in _descriptor_field(entry, "dimensionKeys", list, path=path, where=where):
        dim = _descriptor_field(k, "dimension", str, path=path, where=f"{where} key")
        col = _descriptor_field(k, "column", str, path=path, where=f"{where} key")
        if dim not in dims:
            raise LoadError(f"{where}: key references unknown dimension {dim!r}", path=path)
        keys.append((dim, col))
    numeric = {m for m in measures if m not in text_measures}
    for dim, col in keys:
        if dims[dim].root in dims[dim].numeric:
            numeric.add(col)
    columns = [col for _, col in keys] + list(measures)
    table_path = directory / table
    raw_rows = _read_csv(table_path, columns, numeric)

    fact = Fact(name, measures, tuple(keys), [], frozenset(numeric))
    seen: set[tuple] = set()
    for lineno, row in enumerate(raw_rows, start=2):
        for dim, col in keys:
            val = row.get(col)
            if val is None or val not in dims[dim].rows:
                raise LoadError(
                    f"fact {name!r}: key {col}={cell_to_text(val)!r} has no row in "
                    f"dimension {dim!r}", path=str(table_path), line=lineno)
        key_tuple = fact.key_tuple(row)
        if key_tuple in seen:
            if strict:
                raise LoadError(f"fact {name!r}: duplicate key tuple",
                                path=str(table_path), line=lineno)
            logger.warning("fact %s: duplicate key tuple at %s:%d, keeping the first row",
                           name, table_path, lineno)
            continue
        seen.add(key_tuple)
        fact.rows.append(row)
    return fact


def load_dw(directory: str | Path, strict: bool = False) -> Schema:
    """Load and validate a warehouse directory.

    Returns a :class:`StarSchema` for a single-fact descriptor, otherwise a
    :class:`Constellation`. ``strict`` turns duplicate dimension ids and
    duplicate fact key tuples into errors instead of keep-first-and-log.
    """
    directory = Path(directory)
    desc_path = directory / DESCRIPTOR_NAME
    try:
        text = desc_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read descriptor: {exc}", path=str(desc_path)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"descriptor is not valid JSON: {exc.msg}",
                        path=str(desc_path), line=exc.lineno) from exc
    version = doc.get("formatVersion")
    if version != FORMAT_VERSION:
        raise LoadError(f"unsupported formatVersion {version!r}, expected {FORMAT_VERSION}",
                        path=str(desc_path))
    name = _descriptor_field(doc, "name", str, path=str(desc_path), where="descriptor")

    dims: dict[str, Dimension] = {}
    for entry in _descriptor_field(doc, "dimensions", list, path=str(desc_path),
                                   where="descriptor"):
        dim = _load_dimension(entry, directory, strict, str(desc_path))
        if dim.name in dims:
            raise LoadError(f"duplicate dimension name {dim.name!r}", path=str(desc_path))
        dims[dim.name] = dim

    fact_entries = _descriptor_field(doc, "facts", list, path=str(desc_path),
                                     where="descriptor")
    if not fact_entries:
        raise LoadError("descriptor declares no facts", path=str(desc_path))
    facts = []
    for entry in fact_entries:
        fact = _load_fact(entry, directory, dims, strict, str(desc_path))
        if any(f.name == fact.name for f in facts):
            raise LoadError(f"duplicate fact name {fact.name!r}", path=str(desc_path))
        facts.append(fact)

    star_doc = doc.get("star")
    if len(facts) == 1:
        linked = star_doc.get(facts[0].name) if isinstance(star_doc, dict) else None
        if linked is None or set(linked) == set(dims):
            return StarSchema(name, facts[0], tuple(dims.values()))
        # one fact linked to a dimension subset is a degenerate constellation
    if not isinstance(star_doc, dict):
        raise LoadError("a multi-fact descriptor needs a 'star' map", path=str(desc_path))
    star = {}
    for fname, dim_names in star_doc.items():
        if fname not in {f.name for f in facts}:
            raise LoadError(f"star map references unknown fact {fname!r}", path=str(desc_path))
        for dn in dim_names:
            if dn not in dims:
                raise LoadError(f"star map references unknown dimension {dn!r}",
                                path=str(desc_path))
        star[fname] = tuple(dim_names)
    return Constellation(name, tuple(facts), tuple(dims.values()), star)


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _table_filename(name: str, used: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9_.-]", "_", name) or "table"
    candidate = f"{base}.csv"
    k = 2
    while candidate in used:
        candidate = f"{base}_{k}.csv"
        k += 1
    used.add(candidate)
    return candidate


def _write_csv(path: Path, columns: list[str], rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([cell_to_text(row.get(c)) for c in columns])


def write_dw(schema: Schema, directory: str | Path) -> None:
    """Emit a warehouse directory: descriptor plus one CSV per table.

    Output is byte-deterministic: columns follow declaration order,
    dimension rows are sorted by id, fact rows by their key tuple.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    used_files: set[str] = set()

    facts = [schema.fact] if isinstance(schema, StarSchema) else list(schema.facts)
    dim_entries = []
    for dim in schema.dimensions:
        filename = _table_filename(dim.name, used_files)
        dim_entries.append({
            "name": dim.name,
            "table": filename,
            "id": dim.root,
            "attributes": list(dim.attributes),
            "numericAttributes": sorted(dim.numeric),
            "hierarchies": [{"name": h.name, "parameters": list(h.parameters)}
                            for h in dim.hierarchies],
        })
        ordered = (dim.rows[k] for k in dim.sorted_keys())
        _write_csv(directory / filename, list(dim.attributes), ordered)

    fact_entries = []
    for fact in facts:
        filename = _table_filename(fact.name, used_files)
        fact_entries.append({
            "name": fact.name,
            "table": filename,
            "measures": list(fact.measures),
            "textMeasures": sorted(set(fact.measures) - set(fact.numeric)),
            "dimensionKeys": [{"dimension": d, "column": c}
                              for d, c in fact.dimension_keys],
        })
        columns = list(fact.key_columns()) + list(fact.measures)
        ordered = sorted(fact.rows,
                         key=lambda r: tuple(cell_sort_key(r.get(c))
                                             for c in fact.key_columns()))
        _write_csv(directory / filename, columns, ordered)

    doc = {
        "formatVersion": FORMAT_VERSION,
        "name": schema.name,
        "facts": fact_entries,
        "dimensions": dim_entries,
    }
    if isinstance(schema, Constellation):
        doc["star"] = {f: list(dims) for f, dims in sorted(schema.star.items())}
    else:
        doc["star"] = {schema.fact.name: [d.name for d in schema.dimensions]}
    (directory / DESCRIPTOR_NAME).write_text(
        json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def write_report(report: MergeReport, path: str | Path) -> None:
    """Emit the merge report as a deterministic JSON document."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
