"""Seeded synthetic warehouse pairs with a ground-truth manifest.

Every dimension is generated from one "world" table of ``rows`` rows. Each
attribute has a divisor; the value of attribute ``a`` on world row ``i`` is
the token ``f"{a}_{i // divisor:05d}"``, so along any chain whose divisors
divide each other every level functionally determines the next by
construction. Each warehouse side then samples ``round(overlap * rows)``
world rows independently (same seed, same output, always), which yields
both common and side-only instances: overlap 1.0 gives identical key sets,
overlap 0.0 disjoint (empty) ones.

Facts are generated as unique key-index tuples over the participating
dimensions with seeded integer measures; a side's fact keeps the world rows
whose keys were all sampled by that side, so shared fact tuples carry
identical measures unless a conflict plan says otherwise.

The manifest records ground truth: per-table sampled and shared counts,
the functional dependencies implied by the divisors, and (where the chain
shapes make it predictable) the number of completable cells per attribute.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .model import Dimension, Fact, Hierarchy, Row, StarSchema

MANIFEST_VERSION = 1


@dataclass(frozen=True)
class GenAttr:
    name: str
    divisor: int = 1


@dataclass(frozen=True)
class GenChain:
    name: str
    parameters: tuple[str, ...]


@dataclass(frozen=True)
class GenDimension:
    """One world dimension plus the view each warehouse side gets of it.

    ``view1``/``view2`` list chain names; ``None`` means the side does not
    carry this dimension at all. Attribute sets per side follow from the
    chains.
    """

    name: str
    rows: int
    attrs: tuple[GenAttr, ...]
    chains: tuple[GenChain, ...]
    view1: tuple[str, ...] | None = None  # None here means "all chains"
    view2: tuple[str, ...] | None = None
    overlap: float | None = None


@dataclass(frozen=True)
class GenFact:
    """One world fact over ``dims``; each side may carry it with its own measures."""

    name: str
    rows: int
    dims: tuple[str, ...]
    measures: tuple[str, ...]
    view1: bool = True
    view2: bool = True
    view1_measures: tuple[str, ...] | None = None
    view2_measures: tuple[str, ...] | None = None
    conflict_measure: str | None = None
    conflict_fraction: float = 0.0


@dataclass(frozen=True)
class GenSpec:
    name: str
    seed: int
    dimensions: tuple[GenDimension, ...]
    facts: tuple[GenFact, ...]
    overlap: float = 0.75


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _check_spec(spec: GenSpec) -> None:
    if not (0.0 <= spec.overlap <= 1.0):
        raise ValueError("overlap must be within [0, 1]")
    names = [d.name for d in spec.dimensions]
    if len(set(names)) != len(names):
        raise ValueError("dimension names repeat")
    for d in spec.dimensions:
        if d.overlap is not None and not (0.0 <= d.overlap <= 1.0):
            raise ValueError(f"{d.name}: overlap must be within [0, 1]")
        divisors = {a.name: a.divisor for a in d.attrs}
        if not d.attrs or d.attrs[0].divisor != 1:
            raise ValueError(f"{d.name}: first attribute must be the id with divisor 1")
        for a in d.attrs:
            if a.divisor < 1:
                raise ValueError(f"{d.name}.{a.name}: divisor must be >= 1")
            if a.divisor > d.rows:
                raise ValueError(
                    f"{d.name}.{a.name}: divisor {a.divisor} is infeasible for "
                    f"{d.rows} rows")
        chain_names = set()
        for c in d.chains:
            if c.name in chain_names:
                raise ValueError(f"{d.name}: chain {c.name!r} repeats")
            chain_names.add(c.name)
            if not c.parameters or c.parameters[0] != d.attrs[0].name:
                raise ValueError(f"{d.name}.{c.name}: chains must start at the id")
            for p in c.parameters:
                if p not in divisors:
                    raise ValueError(f"{d.name}.{c.name}: unknown attribute {p!r}")
            for a, b in zip(c.parameters, c.parameters[1:]):
                if divisors[b] % divisors[a] != 0 or divisors[b] <= divisors[a]:
                    raise ValueError(
                        f"{d.name}.{c.name}: divisor of {b!r} must be a strict "
                        f"multiple of {a!r}'s so the level rolls up")
        for view in (d.view1, d.view2):
            if view is not None:
                for cn in view:
                    if cn not in chain_names:
                        raise ValueError(f"{d.name}: view references unknown chain {cn!r}")
    by_name = {d.name: d for d in spec.dimensions}
    for side in (1, 2):
        carried = [f for f in spec.facts if (f.view1 if side == 1 else f.view2)]
        if len(carried) != 1:
            raise ValueError(f"side {side} must carry exactly one fact")
    for f in spec.facts:
        for dn in f.dims:
            if dn not in by_name:
                raise ValueError(f"fact {f.name}: unknown dimension {dn!r}")
            d = by_name[dn]
            if f.view1 and _view_chains(d, 1) is None:
                raise ValueError(f"fact {f.name}: side 1 lacks dimension {dn!r}")
            if f.view2 and _view_chains(d, 2) is None:
                raise ValueError(f"fact {f.name}: side 2 lacks dimension {dn!r}")
        space = 1
        for dn in f.dims:
            space *= by_name[dn].rows
        if f.rows > space:
            raise ValueError(f"fact {f.name}: {f.rows} rows exceed the key space {space}")
        for m in (f.conflict_measure,) if f.conflict_measure else ():
            if m not in f.measures:
                raise ValueError(f"fact {f.name}: conflict measure {m!r} unknown")


def _view_chains(d: GenDimension, side: int) -> tuple[str, ...] | None:
    view = d.view1 if side == 1 else d.view2
    if view is None and (d.view1, d.view2) == (None, None):
        return tuple(c.name for c in d.chains)
    return view


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def _value(attr: str, divisor: int, idx: int) -> str:
    return f"{attr}_{idx // divisor:05d}"


def _sample(rng: random.Random, n: int, fraction: float) -> list[int]:
    count = round(fraction * n)
    return sorted(rng.sample(range(n), count))


def _view_dimension(d: GenDimension, chains: tuple[str, ...], indices: list[int]
                    ) -> Dimension:
    by_name = {c.name: c for c in d.chains}
    attrs: list[str] = []
    for cn in chains:
        for p in by_name[cn].parameters:
            if p not in attrs:
                attrs.append(p)
    divisors = {a.name: a.divisor for a in d.attrs}
    root = d.attrs[0].name
    hierarchies = tuple(Hierarchy(cn, by_name[cn].parameters) for cn in chains)
    rows: dict = {}
    for i in indices:
        row: Row = {a: _value(a, divisors[a], i) for a in attrs}
        rows[row[root]] = row
    return Dimension(d.name, root, tuple(attrs), hierarchies, rows)


def _fact_world(spec: GenSpec, f: GenFact, sizes: dict[str, int]) -> list[dict]:
    rng = random.Random(f"{spec.seed}:{spec.name}:fact:{f.name}")
    space = 1
    for dn in f.dims:
        space *= sizes[dn]
    picks = rng.sample(range(space), f.rows)
    world = []
    for v in sorted(picks):
        key = {}
        rest = v
        for dn in f.dims:
            key[dn] = rest % sizes[dn]
            rest //= sizes[dn]
        measures = {m: Decimal(rng.randrange(1, 100000)) for m in f.measures}
        divergent = f.conflict_measure is not None and rng.random() < f.conflict_fraction
        world.append({"key": key, "measures": measures, "divergent": divergent})
    return world


def _view_fact(f: GenFact, world: list[dict], dims: dict[str, GenDimension],
               sampled: dict[str, set[int]], side: int) -> Fact:
    view_measures = (f.view1_measures if side == 1 else f.view2_measures) or f.measures
    keys = tuple((dn, dims[dn].attrs[0].name) for dn in f.dims)
    rows: list[Row] = []
    for entry in world:
        if any(entry["key"][dn] not in sampled[dn] for dn in f.dims):
            continue
        row: Row = {}
        for dn, col in keys:
            row[col] = _value(col, 1, entry["key"][dn])
        for m in view_measures:
            v = entry["measures"][m]
            if side == 2 and entry["divergent"] and m == f.conflict_measure:
                v = v + 1
            row[m] = v
        rows.append(row)
    return Fact(f.name, tuple(view_measures), keys, rows,
                frozenset(view_measures))


def generate_pair(spec: GenSpec) -> tuple[StarSchema, StarSchema, dict]:
    """Generate the two warehouses and the ground-truth manifest.

    The same spec (seed included) always produces identical output, byte for
    byte once written with :func:`dwmerge.io.write_dw`.
    """
    _check_spec(spec)
    sizes = {d.name: d.rows for d in spec.dimensions}
    sampled: dict[int, dict[str, set[int]]] = {1: {}, 2: {}}
    dims_by_side: dict[int, list[Dimension]] = {1: [], 2: []}
    manifest_dims: dict[str, dict] = {}

    for d in spec.dimensions:
        fraction = d.overlap if d.overlap is not None else spec.overlap
        per_side_indices: dict[int, list[int]] = {}
        for side in (1, 2):
            chains = _view_chains(d, side)
            if chains is None:
                continue
            rng = random.Random(f"{spec.seed}:{spec.name}:dim:{d.name}:{side}")
            indices = _sample(rng, d.rows, fraction)
            per_side_indices[side] = indices
            sampled[side][d.name] = set(indices)
            dims_by_side[side].append(_view_dimension(d, chains, indices))
        shared = (set(per_side_indices.get(1, ())) & set(per_side_indices.get(2, ())))
        manifest_dims[d.name] = {
            "worldRows": d.rows,
            "dw1Rows": len(per_side_indices.get(1, [])) if 1 in per_side_indices else None,
            "dw2Rows": len(per_side_indices.get(2, [])) if 2 in per_side_indices else None,
            "sharedKeys": len(shared),
        }

    manifest_facts: dict[str, dict] = {}
    facts_by_side: dict[int, Fact] = {}
    for f in spec.facts:
        world = _fact_world(spec, f, sizes)
        side_rows = {}
        for side in (1, 2):
            if not (f.view1 if side == 1 else f.view2):
                continue
            fact = _view_fact(f, world, {d.name: d for d in spec.dimensions},
                              sampled[side], side)
            facts_by_side[side] = fact
            side_rows[side] = len(fact.rows)
        shared = 0
        if f.view1 and f.view2:
            shared = sum(1 for e in world
                         if all(e["key"][dn] in sampled[1][dn] for dn in f.dims)
                         and all(e["key"][dn] in sampled[2][dn] for dn in f.dims))
        manifest_facts[f.name] = {
            "worldRows": f.rows,
            "dw1Rows": side_rows.get(1),
            "dw2Rows": side_rows.get(2),
            "sharedKeyTuples": shared,
        }

    dw1 = StarSchema(f"{spec.name}1", facts_by_side[1], tuple(dims_by_side[1]))
    dw2 = StarSchema(f"{spec.name}2", facts_by_side[2], tuple(dims_by_side[2]))
    manifest = {
        "formatVersion": MANIFEST_VERSION,
        "name": spec.name,
        "seed": spec.seed,
        "overlap": spec.overlap,
        "dimensions": manifest_dims,
        "facts": manifest_facts,
        "fdGroundTruth": _fd_ground_truth(spec),
        "expectedCompletions": _expected_completions(spec, sampled),
    }
    return dw1, dw2, manifest


# ---------------------------------------------------------------------------
# ground truth
# ---------------------------------------------------------------------------

def _both_view_attrs(d: GenDimension) -> tuple[list[str], list[str]] | None:
    c1, c2 = _view_chains(d, 1), _view_chains(d, 2)
    if c1 is None or c2 is None:
        return None
    by_name = {c.name: c for c in d.chains}

    def attrs_of(view):
        out = []
        for cn in view:
            for p in by_name[cn].parameters:
                if p not in out:
                    out.append(p)
        return out

    return attrs_of(c1), attrs_of(c2)


def _fd_ground_truth(spec: GenSpec) -> dict[str, list[list[str]]]:
    """Edges a -> b guaranteed by construction: divisor(a) divides divisor(b).

    Stated over the union of both sides' attributes. On a full-overlap join
    discovery finds exactly these edges; a sparse sample may additionally
    satisfy accidental dependencies, so in general they are a certified
    subset of whatever discovery finds on the shared instances.
    """
    out: dict[str, list[list[str]]] = {}
    for d in spec.dimensions:
        views = _both_view_attrs(d)
        if views is None:
            continue
        union: list[str] = []
        for a in views[0] + views[1]:
            if a not in union:
                union.append(a)
        div = {a.name: a.divisor for a in d.attrs}
        edges = [[a, b] for a in union for b in union
                 if a != b and div[b] % div[a] == 0]
        out[d.name] = edges
    return out


def _expected_completions(spec: GenSpec, sampled) -> dict[str, dict[str, int]] | None:
    """Exact completable-cell counts per attribute, where predictable.

    Predictable means: the dimension exists on both sides, shares no
    attribute name with another dimension (no cross-dimension enrichment),
    and every chain pair either interleaves into one divisor-ordered chain
    or shares only the id while no cross FD is implied. Dimensions outside
    those bounds, or larger than a few thousand rows, are simply omitted.
    """
    SIM_ROW_CAP = 2000
    all_names: dict[str, set[str]] = {}
    for d in spec.dimensions:
        all_names[d.name] = {a.name for a in d.attrs}
    out: dict[str, dict[str, int]] = {}
    for d in spec.dimensions:
        views = _both_view_attrs(d)
        if views is None:
            continue
        if any(all_names[d.name] & names for other, names in all_names.items()
               if other != d.name):
            continue
        by_name = {c.name: c for c in d.chains}
        div = {a.name: a.divisor for a in d.attrs}
        root = d.attrs[0].name
        virtual: list[tuple[str, ...]] = []
        predictable = True
        for cn1 in _view_chains(d, 1):
            for cn2 in _view_chains(d, 2):
                p1, p2 = by_name[cn1].parameters, by_name[cn2].parameters
                shared = set(p1) & set(p2)
                if shared == {root}:
                    cross = [(a, b) for a in p1[1:] for b in p2[1:]
                             if div[b] % div[a] == 0 or div[a] % div[b] == 0]
                    if cross:
                        predictable = False
                        break
                    for c in (p1, p2):
                        if c not in virtual:
                            virtual.append(c)
                else:
                    union = sorted(set(p1) | set(p2), key=lambda a: div[a])
                    if any(div[b] % div[a] != 0 or div[a] == div[b]
                           for a, b in zip(union, union[1:])):
                        predictable = False
                        break
                    u = tuple(union)
                    if u not in virtual:
                        virtual.append(u)
            if not predictable:
                break
        if not predictable:
            continue
        attrs1, attrs2 = views
        idx1, idx2 = sampled[1][d.name], sampled[2][d.name]
        if len(idx1 | idx2) > SIM_ROW_CAP:
            continue
        present: dict[int, set[str]] = {}
        for i in idx1 | idx2:
            s = set()
            if i in idx1:
                s |= set(attrs1)
            if i in idx2:
                s |= set(attrs2)
            present[i] = s
        fills: dict[str, int] = {}
        changed = True
        while changed:
            changed = False
            for chain in virtual:
                if len(chain) < 2:
                    continue
                for i in sorted(present):
                    s = present[i]
                    if chain[1] not in s:
                        continue
                    missing = [p for p in chain if p not in s]
                    if not missing:
                        continue
                    first = chain.index(missing[0])
                    refs = [p for p in chain[:first]]
                    donor = None
                    for j in sorted(present):
                        if j == i:
                            continue
                        sj = present[j]
                        if not all(m in sj for m in missing):
                            continue
                        if any(p in sj and j // div[p] == i // div[p] for p in refs):
                            donor = j
                            break
                    if donor is not None:
                        for m in missing:
                            s.add(m)
                            fills[m] = fills.get(m, 0) + 1
                        changed = True
        out[d.name] = dict(sorted(fills.items()))
    return out


# ---------------------------------------------------------------------------
# spec serialization and presets
# ---------------------------------------------------------------------------

def spec_to_dict(spec: GenSpec) -> dict:
    return {
        "formatVersion": MANIFEST_VERSION,
        "name": spec.name,
        "seed": spec.seed,
        "overlap": spec.overlap,
        "dimensions": [{
            "name": d.name, "rows": d.rows,
            "attrs": [{"name": a.name, "divisor": a.divisor} for a in d.attrs],
            "chains": [{"name": c.name, "parameters": list(c.parameters)}
                       for c in d.chains],
            "view1": list(d.view1) if d.view1 is not None else None,
            "view2": list(d.view2) if d.view2 is not None else None,
            "overlap": d.overlap,
        } for d in spec.dimensions],
        "facts": [{
            "name": f.name, "rows": f.rows, "dims": list(f.dims),
            "measures": list(f.measures), "view1": f.view1, "view2": f.view2,
            "view1Measures": list(f.view1_measures) if f.view1_measures else None,
            "view2Measures": list(f.view2_measures) if f.view2_measures else None,
            "conflictMeasure": f.conflict_measure,
            "conflictFraction": f.conflict_fraction,
        } for f in spec.facts],
    }


def spec_from_dict(doc: dict) -> GenSpec:
    dims = tuple(GenDimension(
        name=d["name"], rows=d["rows"],
        attrs=tuple(GenAttr(a["name"], a.get("divisor", 1)) for a in d["attrs"]),
        chains=tuple(GenChain(c["name"], tuple(c["parameters"])) for c in d["chains"]),
        view1=tuple(d["view1"]) if d.get("view1") is not None else None,
        view2=tuple(d["view2"]) if d.get("view2") is not None else None,
        overlap=d.get("overlap"),
    ) for d in doc["dimensions"])
    facts = tuple(GenFact(
        name=f["name"], rows=f["rows"], dims=tuple(f["dims"]),
        measures=tuple(f["measures"]),
        view1=f.get("view1", True), view2=f.get("view2", True),
        view1_measures=tuple(f["view1Measures"]) if f.get("view1Measures") else None,
        view2_measures=tuple(f["view2Measures"]) if f.get("view2Measures") else None,
        conflict_measure=f.get("conflictMeasure"),
        conflict_fraction=f.get("conflictFraction", 0.0),
    ) for f in doc["facts"])
    return GenSpec(doc["name"], doc["seed"], dims, facts, doc.get("overlap", 0.75))


def load_spec(path: str | Path) -> GenSpec:
    return spec_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def preset_basic(seed: int, rows: int = 400, overlap: float = 0.75,
                 fact_rows: int = 1200) -> GenSpec:
    """Two fully shared dimensions, identical chains on both sides."""
    customer = GenDimension(
        "customer", rows,
        attrs=(GenAttr("customer_id"), GenAttr("city", 2), GenAttr("nation", 10),
               GenAttr("region", 50), GenAttr("mktsegment", 3), GenAttr("grp", 21)),
        chains=(GenChain("geo", ("customer_id", "city", "nation", "region")),
                GenChain("seg", ("customer_id", "mktsegment", "grp"))))
    product = GenDimension(
        "product", max(rows // 2, 8),
        attrs=(GenAttr("product_id"), GenAttr("brand", 4), GenAttr("category", 20)),
        chains=(GenChain("brands", ("product_id", "brand", "category")),))
    fact = GenFact("sales", fact_rows, ("customer", "product"),
                   ("quantity", "price"))
    return GenSpec("basic", seed, (customer, product), (fact,), overlap)


def preset_divergent(seed: int, rows: int = 600, overlap: float = 0.75,
                     fact_rows: int = 1500) -> GenSpec:
    """Hierarchies split across the sides so merging must discover the order."""
    customer = GenDimension(
        "customer", rows,
        attrs=(GenAttr("customer_id"), GenAttr("city", 2), GenAttr("department", 10),
               GenAttr("region", 50), GenAttr("country", 100), GenAttr("continent", 500),
               GenAttr("profession", 21), GenAttr("subcategory", 63),
               GenAttr("category", 441)),
        chains=(GenChain("geo_a", ("customer_id", "department", "region", "continent")),
                GenChain("geo_b", ("customer_id", "city", "department", "country",
                                   "continent")),
                GenChain("prof_a", ("customer_id", "profession", "category")),
                GenChain("prof_b", ("customer_id", "profession", "subcategory"))),
        view1=("geo_a", "prof_a"), view2=("geo_b", "prof_b"))
    product = GenDimension(
        "product", max(rows // 3, 8),
        attrs=(GenAttr("product_id"), GenAttr("brand", 4), GenAttr("family", 24)),
        chains=(GenChain("brands", ("product_id", "brand", "family")),))
    fact = GenFact("sales", fact_rows, ("customer", "product"),
                   ("quantity", "price", "tax"),
                   view1_measures=("quantity", "price"),
                   view2_measures=("quantity", "tax"))
    return GenSpec("divergent", seed, (customer, product), (fact,), overlap)


def preset_star4(seed: int, overlap: float = 0.75, fact_rows: int = 4000) -> GenSpec:
    """Four matched dimensions with cross-dimension enrichment; merges to a star."""
    customer = GenDimension(
        "customer", 400,
        attrs=(GenAttr("customer_id"), GenAttr("city", 2), GenAttr("nation", 20),
               GenAttr("mktsegment", 3)),
        chains=(GenChain("c_geo_a", ("customer_id", "city", "nation")),
                GenChain("c_geo_b", ("customer_id", "nation")),
                GenChain("c_seg", ("customer_id", "mktsegment"))),
        view1=("c_geo_a", "c_seg"), view2=("c_geo_b", "c_seg"))
    supplier = GenDimension(
        "supplier", 120,
        attrs=(GenAttr("supplier_id"), GenAttr("nation", 6), GenAttr("region", 30)),
        chains=(GenChain("s_geo_a", ("supplier_id", "nation")),
                GenChain("s_geo_b", ("supplier_id", "nation", "region"))),
        view1=("s_geo_a",), view2=("s_geo_b",))
    part = GenDimension(
        "part", 300,
        attrs=(GenAttr("part_id"), GenAttr("brand", 2), GenAttr("ptype", 10)),
        chains=(GenChain("p_main", ("part_id", "brand", "ptype")),))
    orderdate = GenDimension(
        "orderdate", 720,
        attrs=(GenAttr("date_id"), GenAttr("month", 30), GenAttr("semester", 180),
               GenAttr("year", 360)),
        chains=(GenChain("d_sem", ("date_id", "month", "semester", "year")),
                GenChain("d_plain", ("date_id", "month", "year"))),
        view1=("d_sem",), view2=("d_plain",))
    fact = GenFact("lineorder", fact_rows, ("customer", "supplier", "part", "orderdate"),
                   ("quantity", "revenue", "supplycost"),
                   view1_measures=("quantity", "revenue"),
                   view2_measures=("quantity", "supplycost"))
    return GenSpec("star4", seed, (customer, supplier, part, orderdate), (fact,), overlap)


def preset_const22(seed: int, overlap: float = 0.75) -> GenSpec:
    """Two matched and two side-only dimensions; merges to a constellation."""
    customer = GenDimension(
        "customer", 400,
        attrs=(GenAttr("customer_id"), GenAttr("city", 2), GenAttr("nation", 20)),
        chains=(GenChain("c_geo_a", ("customer_id", "city", "nation")),
                GenChain("c_geo_b", ("customer_id", "nation"))),
        view1=("c_geo_a",), view2=("c_geo_b",))
    supplier = GenDimension(
        "supplier", 120,
        attrs=(GenAttr("supplier_id"), GenAttr("nation", 6), GenAttr("region", 30)),
        chains=(GenChain("s_geo_a", ("supplier_id", "nation", "region")),
                GenChain("s_geo_b", ("supplier_id", "nation"))),
        view1=("s_geo_a",), view2=("s_geo_b",))
    part = GenDimension(
        "part", 300,
        attrs=(GenAttr("part_id"), GenAttr("brand", 2), GenAttr("ptype", 10)),
        chains=(GenChain("p_main", ("part_id", "brand", "ptype")),),
        view1=("p_main",), view2=None)
    orderdate = GenDimension(
        "orderdate", 720,
        attrs=(GenAttr("date_id"), GenAttr("month", 30), GenAttr("year", 360)),
        chains=(GenChain("d_plain", ("date_id", "month", "year")),),
        view1=None, view2=("d_plain",))
    sales_parts = GenFact("sales_parts", 2500, ("customer", "supplier", "part"),
                          ("quantity", "revenue"), view1=True, view2=False)
    sales_dates = GenFact("sales_dates", 2500, ("customer", "supplier", "orderdate"),
                          ("quantity", "supplycost"), view1=False, view2=True)
    return GenSpec("const22", seed, (customer, supplier, part, orderdate),
                   (sales_parts, sales_dates), overlap)


PRESETS = {
    "basic": preset_basic,
    "divergent": preset_divergent,
    "star4": preset_star4,
    "const22": preset_const22,
}
