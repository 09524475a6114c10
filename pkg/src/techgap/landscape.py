"""Landscape pipeline: expansion -> densifying regions -> L = (P, T, C).

P is the performance relation: one row per (organization, year, technology
concept) with the four default KPI metrics. T is the technology correlation
graph (co-occurrence edges between region technologies merged with the
ontology fragment around them). C is the organizational partnership graph
restricted to organizations that have at least one P row, with per-edge
cooperative evidence (joint patents, co-mentions in one document, declared
partnerships).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

from . import analytics
from .analytics import RoiSubgraph, DensitySeries, detect_densifying_regions
from .errors import EmptyExpansion, UnknownDimension
from .ingest import (
    DataEdge,
    FundingRecord,
    NewsDocument,
    PartnershipRecord,
    PatentRecord,
    org_id,
    tech_id,
)
from .ontology import DEFAULT_MAX_DEPTH, ExpansionQuery, OntologyGraph
from .stores import ViewSnapshot
from .util import content_id

METRICS = ("patent_count", "publication_count", "award_total", "news_mentions")
DIMENSIONS = ("org", "interval", "tech")
ONTOLOGY_MERGE_LEVELS = 2


@dataclass(frozen=True)
class PerformanceRow:
    org: str
    interval: int  # calendar year
    tech: str  # concept id
    metrics: tuple[float, ...]  # aligned with METRICS

    def as_dict(self) -> dict:
        return {
            "org": self.org,
            "interval": self.interval,
            "tech": self.tech,
            **{m: v for m, v in zip(METRICS, self.metrics)},
        }


@dataclass
class Landscape:
    landscape_id: str
    rows: list[PerformanceRow]
    tech_nodes: list[str]
    tech_edges: list[dict]  # {a, b, label, weight?}
    org_nodes: list[str]
    org_edges: list[dict]  # {a, b, tech, evidence, count}
    rois: list[RoiSubgraph]
    g_nodes: list[str]
    g_edges: list[DataEdge]
    provenance: dict

    @property
    def orgs(self) -> set[str]:
        return set(self.org_nodes)

    @property
    def techs(self) -> set[str]:
        return {r.tech for r in self.rows}

    def intervals(self) -> list[int]:
        return sorted({r.interval for r in self.rows})


def default_params() -> dict:
    return {
        "max_depth": DEFAULT_MAX_DEPTH,
        "min_nodes": analytics.DEFAULT_MIN_NODES,
        "min_clust": analytics.DEFAULT_MIN_CLUST,
        "history": analytics.DEFAULT_HISTORY,
    }


def run_landscape(
    ontology: OntologyGraph,
    snapshot: ViewSnapshot,
    pos,
    neg=(),
    params: dict | None = None,
    index=None,
) -> Landscape:
    """Expansion, region detection, and landscape construction in order.

    Finding no densifying region yields an empty landscape (P and C empty,
    T carrying the expansion's ontology fragment), not a failure.
    """
    p = default_params()
    if params:
        p.update(params)
    query = ExpansionQuery(pos=tuple(pos), neg=tuple(neg), max_depth=p["max_depth"])
    expansion = ontology.expand_query(query)
    seeds = snapshot.concepts_to_instances(expansion)
    rois = detect_densifying_regions(
        seeds,
        snapshot,
        min_nodes=p["min_nodes"],
        min_clust=p["min_clust"],
        history=p["history"],
        index=index,
        seed_concepts=sorted(expansion),
    )
    provenance = {
        "pos": sorted(pos),
        "neg": sorted(neg),
        "params": p,
        "snapshot_id": snapshot.snapshot_id,
        "expansion": sorted(expansion),
    }
    return construct_landscape(rois, snapshot, ontology, expansion, provenance)


def _tech_concept(snapshot: ViewSnapshot, entity_id: str):
    name = snapshot.entities[entity_id].properties.get("name", "")
    return snapshot.string_to_concept("graph", name)


def construct_landscape(
    rois: list[RoiSubgraph],
    snapshot: ViewSnapshot,
    ontology: OntologyGraph,
    expansion=(),
    provenance: dict | None = None,
) -> Landscape:
    provenance = provenance or {}
    g_nodes = sorted({n for r in rois for n in r.nodes})
    g_edge_set = {}
    for r in rois:
        for e in r.edges:
            g_edge_set[e.sort_key()] = e
    g_edges = [g_edge_set[k] for k in sorted(g_edge_set)]
    g_set = set(g_nodes)

    adj = snapshot.undirected_adjacency()
    orgs = {
        n for n in g_nodes if snapshot.entities[n].entity_kind == "Organization"
    }
    # companies inside the region or within its first neighborhood
    for n in g_nodes:
        for m in adj.get(n, ()):
            if snapshot.entities[m].entity_kind == "Organization":
                orgs.add(m)

    tech_entities = [
        n for n in g_nodes if snapshot.entities[n].entity_kind == "Technology"
    ]
    concept_of = {}
    for t in tech_entities:
        c = _tech_concept(snapshot, t)
        if c is not None:
            concept_of[t] = c
    concepts = set(concept_of.values())

    # --- performance relation -------------------------------------------
    acc: dict[tuple[str, int, str], dict[str, float]] = {}

    def bump(org: str, year: int, tech: str, metric: str, amount: float = 1.0):
        cell = acc.setdefault((org, year, tech), {m: 0.0 for m in METRICS})
        cell[metric] += amount

    for batch in snapshot.batches:
        for rec in batch.records:
            if isinstance(rec, PatentRecord):
                year = rec.grant_date.year
                rec_concepts = sorted(
                    {
                        concept_of[tech_id(t)]
                        for t in rec.technology_terms
                        if tech_id(t) in concept_of
                    }
                )
                for a in rec.assignees:
                    o = org_id(a)
                    if o not in orgs:
                        continue
                    for c in rec_concepts:
                        bump(o, year, c, "patent_count")
            elif isinstance(rec, NewsDocument):
                year = rec.publish_date.year
                doc_orgs = sorted(
                    {
                        org_id(s)
                        for s, k, _, _ in rec.mentions
                        if k == "organization" and org_id(s) in orgs
                    }
                )
                tech_mentions: dict[str, int] = {}
                for s, k, _, _ in rec.mentions:
                    if k == "technology" and tech_id(s) in concept_of:
                        c = concept_of[tech_id(s)]
                        tech_mentions[c] = tech_mentions.get(c, 0) + 1
                for o in doc_orgs:
                    for c, count in sorted(tech_mentions.items()):
                        bump(o, year, c, "publication_count")
                        bump(o, year, c, "news_mentions", count)
            elif isinstance(rec, FundingRecord):
                o = org_id(rec.recipient)
                if o not in orgs:
                    continue
                year = rec.start_date.year
                for t in sorted(rec.technology_terms):
                    if tech_id(t) in concept_of:
                        bump(o, year, concept_of[tech_id(t)], "award_total", rec.amount)

    rows = [
        PerformanceRow(org=o, interval=y, tech=c, metrics=tuple(m[x] for x in METRICS))
        for (o, y, c), m in sorted(acc.items())
    ]

    # --- technology correlation graph -----------------------------------
    t_nodes = set(concepts) | set(expansion)
    frontier = set(concepts)
    for _ in range(ONTOLOGY_MERGE_LEVELS):
        parents = set()
        for c in frontier:
            for rel in ("subclassOf", "componentOf"):
                parents.update(ontology.parents_of(c, rel))
        t_nodes |= parents
        frontier = parents
    t_edges = []
    for rel in ("subclassOf", "componentOf"):
        for c in sorted(t_nodes):
            if c not in ontology.nodes:
                continue
            for child in ontology.children_of(c, rel):
                if child in t_nodes:
                    t_edges.append({"a": c, "b": child, "label": rel})
    cooc_weight: dict[tuple[str, str], float] = {}
    for e in g_edges:
        if e.edge_kind != "coOccurrence":
            continue
        ca, cb = concept_of.get(e.src), concept_of.get(e.dst)
        if ca is None or cb is None or ca == cb:
            continue
        key = (ca, cb) if ca < cb else (cb, ca)
        cooc_weight[key] = cooc_weight.get(key, 0.0) + e.weight
    for (ca, cb), w in sorted(cooc_weight.items()):
        t_edges.append({"a": ca, "b": cb, "label": "coOccurrence", "weight": w})

    # --- organizational partnership graph ---------------------------------
    active_orgs = {r.org for r in rows}
    c_evidence: dict[tuple[str, str, str, str], int] = {}

    def evidence(a: str, b: str, tech, kind: str):
        if a == b:
            return
        if b < a:
            a, b = b, a
        key = (a, b, tech or "", kind)
        c_evidence[key] = c_evidence.get(key, 0) + 1

    for batch in snapshot.batches:
        for rec in batch.records:
            if isinstance(rec, PatentRecord) and len(rec.assignees) > 1:
                rec_orgs = sorted(
                    {org_id(a) for a in rec.assignees if org_id(a) in active_orgs}
                )
                rec_concepts = sorted(
                    {
                        concept_of[tech_id(t)]
                        for t in rec.technology_terms
                        if tech_id(t) in concept_of
                    }
                ) or [None]
                for i, a in enumerate(rec_orgs):
                    for b in rec_orgs[i + 1:]:
                        for c in rec_concepts:
                            evidence(a, b, c, "jointPatent")
            elif isinstance(rec, NewsDocument):
                doc_orgs = sorted(
                    {
                        org_id(s)
                        for s, k, _, _ in rec.mentions
                        if k == "organization" and org_id(s) in active_orgs
                    }
                )
                doc_concepts = sorted(
                    {
                        concept_of[tech_id(s)]
                        for s, k, _, _ in rec.mentions
                        if k == "technology" and tech_id(s) in concept_of
                    }
                ) or [None]
                for i, a in enumerate(doc_orgs):
                    for b in doc_orgs[i + 1:]:
                        for c in doc_concepts:
                            evidence(a, b, c, "coAuthorship")
            elif isinstance(rec, PartnershipRecord):
                a, b = org_id(rec.org_a), org_id(rec.org_b)
                if a in active_orgs and b in active_orgs:
                    evidence(a, b, None, "declaredPartnership")

    org_edges = [
        {"a": a, "b": b, "tech": tech or None, "evidence": kind, "count": count}
        for (a, b, tech, kind), count in sorted(c_evidence.items())
    ]

    landscape_id = content_id("lscape", provenance)
    return Landscape(
        landscape_id=landscape_id,
        rows=rows,
        tech_nodes=sorted(t_nodes),
        tech_edges=t_edges,
        org_nodes=sorted(active_orgs),
        org_edges=org_edges,
        rois=rois,
        g_nodes=g_nodes,
        g_edges=g_edges,
        provenance=provenance,
    )


def kpi_cube(landscape: Landscape, dims=()) -> list[dict]:
    """Sum each metric grouped by the chosen dimensions (data-cube cell)."""
    dims = tuple(dims)
    for d in dims:
        if d not in DIMENSIONS:
            raise UnknownDimension(d)
    groups: dict[tuple, list[float]] = {}
    for row in landscape.rows:
        key = tuple(getattr(row, d) for d in dims)
        cell = groups.setdefault(key, [0.0] * len(METRICS))
        for i, v in enumerate(row.metrics):
            cell[i] += v
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
        row = {d: k for d, k in zip(dims, key)}
        row.update({m: v for m, v in zip(METRICS, groups[key])})
        out.append(row)
    if not out:
        out.append({m: 0.0 for m in METRICS})
    return out


def kpi_vectors(landscape: Landscape, techs=None, window: int | None = None) -> dict[str, tuple[float, ...]]:
    """Per-organization KPI vectors over the given technologies and the
    trailing `window` intervals of the performance relation."""
    intervals = landscape.intervals()
    cutoff = None
    if window is not None and intervals:
        cutoff = max(intervals) - window + 1
    vectors: dict[str, list[float]] = {o: [0.0] * len(METRICS) for o in landscape.org_nodes}
    for row in landscape.rows:
        if techs is not None and row.tech not in techs:
            continue
        if cutoff is not None and row.interval < cutoff:
            continue
        vec = vectors.setdefault(row.org, [0.0] * len(METRICS))
        for i, v in enumerate(row.metrics):
            vec[i] += v
    return {o: tuple(v) for o, v in vectors.items()}


# --- serialization ------------------------------------------------------------

def _edge_dict(e: DataEdge) -> dict:
    return {
        "src": e.src,
        "dst": e.dst,
        "edge_kind": e.edge_kind,
        "timestamp": e.timestamp.isoformat(),
        "weight": e.weight,
    }


def _edge_from_dict(d: dict) -> DataEdge:
    return DataEdge(
        src=d["src"],
        dst=d["dst"],
        edge_kind=d["edge_kind"],
        timestamp=date.fromisoformat(d["timestamp"]),
        weight=d["weight"],
    )


def landscape_to_bundle(landscape: Landscape) -> dict:
    return {
        "landscape_id": landscape.landscape_id,
        "provenance": landscape.provenance,
        "performance_relation": [r.as_dict() for r in landscape.rows],
        "technology_graph": {
            "nodes": landscape.tech_nodes,
            "edges": landscape.tech_edges,
        },
        "organization_graph": {
            "nodes": landscape.org_nodes,
            "edges": landscape.org_edges,
        },
        "rois": [r.as_dict() for r in landscape.rois],
        "roi_graph": {
            "nodes": landscape.g_nodes,
            "edges": [_edge_dict(e) for e in landscape.g_edges],
        },
    }


def landscape_from_bundle(bundle: dict) -> Landscape:
    rows = [
        PerformanceRow(
            org=r["org"],
            interval=r["interval"],
            tech=r["tech"],
            metrics=tuple(r[m] for m in METRICS),
        )
        for r in bundle["performance_relation"]
    ]
    rois = []
    for rd in bundle["rois"]:
        series = rd["density_series"]
        rois.append(
            RoiSubgraph(
                roi_id=rd["roi_id"],
                nodes=tuple(rd["nodes"]),
                edges=tuple(_edge_from_dict(e) for e in rd["edges"]),
                seed_concepts=tuple(rd["seed_concepts"]),
                params=rd["params"],
                density_series=DensitySeries(
                    nodes=tuple(rd["nodes"]),
                    buckets=series["buckets"],
                    node_counts=series["node_counts"],
                    edge_counts=series["edge_counts"],
                    densities=series["densities"],
                ),
                avg_clustering=rd["avg_clustering"],
            )
        )
    return Landscape(
        landscape_id=bundle["landscape_id"],
        rows=rows,
        tech_nodes=bundle["technology_graph"]["nodes"],
        tech_edges=bundle["technology_graph"]["edges"],
        org_nodes=bundle["organization_graph"]["nodes"],
        org_edges=bundle["organization_graph"]["edges"],
        rois=rois,
        g_nodes=bundle["roi_graph"]["nodes"],
        g_edges=[_edge_from_dict(e) for e in bundle["roi_graph"]["edges"]],
        provenance=bundle["provenance"],
    )
