"""Server-side chart shaping.

The dashboard is a thin renderer: every chart payload is fully computed here
by joining the performance relation with the entity tables and mappings, so
no analytics happen client-side.

Kinds:
  spider            one axis per positive seed concept; per-source volumes
  timeline          one row per landscape technology; dated innovation events
  comparative_bars  two ranked leader panels for a technology pair
"""

from __future__ import annotations

from .errors import UnknownChartKind
from .gap import comparative_gap
from .ingest import FundingRecord, PatentRecord, org_id, tech_id
from .landscape import Landscape
from .ontology import OntologyGraph
from .stores import ViewSnapshot

CHART_KINDS = ("spider", "timeline", "comparative_bars")

SOURCE_OF_KIND = {
    "Patent": "patents",
    "Document": "news",
    "Award": "funding",
    "Organization": "organizations",
    "Technology": "technologies",
}


def spider_payload(landscape: Landscape, snapshot: ViewSnapshot, ontology: OntologyGraph) -> dict:
    """Expansion volumes: for each positive seed concept, how many instances
    of each source kind sit under its expansion subtree."""
    pos_terms = landscape.provenance.get("pos", [])
    expansion = set(landscape.provenance.get("expansion", []))
    axes = []
    for term in pos_terms:
        for cid in sorted(ontology.resolve_term(term)):
            axes.append({"concept": cid, "label": ontology.nodes[cid].preferred_label})
    by_int = {i: eid for eid, i in snapshot.table_ids.items()}
    sources = sorted(set(SOURCE_OF_KIND.values()))
    series = {s: [] for s in sources}
    for axis in axes:
        subtree = set()
        for rel in ("subclassOf", "componentOf"):
            subtree |= ontology.descendants(axis["concept"], rel)
        subtree &= expansion | {axis["concept"]}
        members: set[str] = set()
        for c in sorted(subtree):
            for i in snapshot.forward.instances(c, "table"):
                members.add(by_int[i])
        counts = {s: 0 for s in sources}
        for eid in members:
            counts[SOURCE_OF_KIND[snapshot.entities[eid].entity_kind]] += 1
        for s in sources:
            series[s].append(counts[s])
    return {
        "chart": "spider",
        "axes": axes,
        "series": [{"source": s, "values": series[s]} for s in sources],
    }


def timeline_payload(landscape: Landscape, snapshot: ViewSnapshot, ontology: OntologyGraph) -> dict:
    """Per technology, the dated innovation events (patent grants, awards)
    behind the landscape's performance relation."""
    concepts = sorted(landscape.techs)
    events: dict[str, list[dict]] = {c: [] for c in concepts}
    orgs = landscape.orgs
    for batch in snapshot.batches:
        for rec in batch.records:
            if isinstance(rec, PatentRecord):
                rec_orgs = [org_id(a) for a in rec.assignees if org_id(a) in orgs]
                if not rec_orgs:
                    continue
                for term in rec.technology_terms:
                    c = snapshot.string_to_concept("graph", term)
                    if c in events:
                        events[c].append(
                            {
                                "date": rec.grant_date.isoformat(),
                                "kind": "patentGrant",
                                "ref": f"patent:{rec.patent_id}",
                                "orgs": rec_orgs,
                            }
                        )
            elif isinstance(rec, FundingRecord):
                o = org_id(rec.recipient)
                if o not in orgs:
                    continue
                for term in rec.technology_terms:
                    c = snapshot.string_to_concept("graph", term)
                    if c in events:
                        events[c].append(
                            {
                                "date": rec.start_date.isoformat(),
                                "kind": "award",
                                "ref": f"award:{rec.award_id}",
                                "orgs": [o],
                            }
                        )
    rows = []
    for c in concepts:
        label = ontology.nodes[c].preferred_label if c in ontology.nodes else c
        rows.append(
            {
                "tech": c,
                "label": label,
                "events": sorted(events[c], key=lambda e: (e["date"], e["ref"])),
            }
        )
    return {"chart": "timeline", "rows": rows}


def comparative_payload(
    ontology: OntologyGraph,
    snapshot: ViewSnapshot,
    org: str,
    tech_a: str,
    tech_b: str,
    context_terms=(),
    params=None,
    theta: float = 0.0,
) -> dict:
    result = comparative_gap(
        ontology,
        snapshot,
        org=org,
        tech_a=tech_a,
        tech_b=tech_b,
        context_terms=context_terms,
        params=params,
        theta=theta,
    )
    panels = []
    for side in ("tech_a", "tech_b"):
        summary = result[side]
        panels.append(
            {
                "tech": summary["tech"],
                "landscape_id": summary["landscape_id"],
                "leaders": summary["leaders"],
                "reference": summary["reference"],
                "gap_orgs": summary["gap_orgs"],
            }
        )
    return {"chart": "comparative_bars", "org": result["org"], "panels": panels}


def chart_payload(kind: str, landscape, snapshot, ontology, **kw) -> dict:
    if kind == "spider":
        return spider_payload(landscape, snapshot, ontology)
    if kind == "timeline":
        return timeline_payload(landscape, snapshot, ontology)
    if kind == "comparative_bars":
        return comparative_payload(ontology, snapshot, **kw)
    raise UnknownChartKind(kind)
