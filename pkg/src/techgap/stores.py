"""Embedded emulation of the materialized polystore view.

Three embedded stores sit behind one snapshot interface: an entity table
(relational rows), a timestamped property graph, and a text/term index.
A forward mapping carries, per concept, three delta-compressed posting lists
of integer instance ids (one per store); a reverse mapping per store takes a
normalized surface string back to its concept where that is unambiguous
(the reverse direction is partial by design).

Snapshots are immutable after materialization. A refresh builds a complete
new snapshot from the merged source batches; readers of the old snapshot are
unaffected. All contents are deterministic functions of the inputs, so two
materializations of the same sources produce byte-identical dumps.
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass
from datetime import date

from .errors import MappingConflict, OrphanEdge
from .ingest import (
    DataEdge,
    FundingRecord,
    NewsDocument,
    PartnershipRecord,
    PatentRecord,
    SourceBatch,
    derive_relationships,
    org_id,
    tech_id,
)
from .ontology import OntologyGraph
from .postings import decode_postings, encode_postings
from .util import canonical_json, canonical_jsonl, normalize_term

ENTITY_KINDS = ("Technology", "Organization", "Patent", "Document", "Award")
STORES = ("table", "graph", "text")


@dataclass
class EntityRecord:
    entity_id: str
    entity_kind: str
    properties: dict

    def row(self) -> dict:
        return {
            "entity_id": self.entity_id,
            "entity_kind": self.entity_kind,
            "properties": self.properties,
        }


@dataclass(frozen=True)
class NodeStats:
    indegree: int
    outdegree: int
    clustering_coefficient: float


@dataclass
class ForwardMapping:
    """concept_id -> per-store compressed posting lists (bytes)."""

    postings: dict[str, dict[str, bytes]]

    def instances(self, concept: str, store: str) -> list[int]:
        entry = self.postings.get(concept)
        if entry is None:
            return []
        return decode_postings(entry[store])


@dataclass
class ReverseMapping:
    """per-store normalized surface -> concept_id (partial)."""

    by_store: dict[str, dict[str, str]]

    def lookup(self, store: str, surface: str):
        return self.by_store.get(store, {}).get(normalize_term(surface))


class ViewSnapshot:
    """Immutable materialized view over the three embedded stores."""

    def __init__(
        self,
        entities: dict[str, EntityRecord],
        edges: list[DataEdge],
        text_docs: dict[str, frozenset[str]],
        forward: ForwardMapping,
        reverse: ReverseMapping,
        batches: tuple[SourceBatch, ...],
        created_at: date,
    ):
        self.entities = entities
        self.edges = tuple(edges)
        self.text_docs = text_docs  # doc entity_id -> normalized surface set
        self.forward = forward
        self.reverse = reverse
        self.batches = batches
        self.created_at = created_at
        # integer instance ids per store (sorted entity ids -> dense ints)
        self.table_ids = {eid: i for i, eid in enumerate(sorted(entities))}
        graph_nodes = sorted({e.src for e in edges} | {e.dst for e in edges})
        self.graph_ids = {eid: i for i, eid in enumerate(graph_nodes)}
        self.text_ids = {eid: i for i, eid in enumerate(sorted(text_docs))}
        self.node_stats = self._compute_node_stats()
        self.snapshot_id = "snap-" + hashlib.sha256(
            "".join(self.dumps().values()).encode("utf-8")
        ).hexdigest()[:12]

    # --- store contents ---------------------------------------------------

    @property
    def graph_nodes(self) -> list[str]:
        return sorted(self.graph_ids)

    def undirected_adjacency(self, kinds=None) -> dict[str, set[str]]:
        """Simple undirected projection of the edge multiset."""
        adj: dict[str, set[str]] = {n: set() for n in self.graph_ids}
        for e in self.edges:
            if kinds is not None and e.edge_kind not in kinds:
                continue
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
        return adj

    def _compute_node_stats(self) -> dict[str, NodeStats]:
        indeg = {n: 0 for n in self.graph_ids}
        outdeg = {n: 0 for n in self.graph_ids}
        for e in self.edges:
            outdeg[e.src] += 1
            indeg[e.dst] += 1
        adj = self.undirected_adjacency()
        stats = {}
        for n in self.graph_ids:
            neigh = adj[n]
            deg = len(neigh)
            if deg < 2:
                cc = 0.0
            else:
                links = sum(len(adj[u] & neigh) for u in neigh) // 2
                cc = 2.0 * links / (deg * (deg - 1))
            stats[n] = NodeStats(indeg[n], outdeg[n], cc)
        return stats

    # --- mapping queries ----------------------------------------------------

    def concepts_to_instances(self, concepts) -> set[str]:
        """Graph-store instances for a concept set; unknown concepts are
        ignored (an expansion may legitimately cover concepts with no data)."""
        by_int = {i: eid for eid, i in self.graph_ids.items()}
        out: set[str] = set()
        for c in sorted(concepts):
            for i in self.forward.instances(c, "graph"):
                out.add(by_int[i])
        return out

    def string_to_concept(self, store: str, surface: str):
        return self.reverse.lookup(store, surface)

    # --- dumps ---------------------------------------------------------------

    def dumps(self) -> dict[str, str]:
        entities = canonical_jsonl(
            self.entities[eid].row() for eid in sorted(self.entities)
        )
        edges = canonical_jsonl(
            {
                "src": e.src,
                "dst": e.dst,
                "edge_kind": e.edge_kind,
                "timestamp": e.timestamp.isoformat(),
                "weight": e.weight,
            }
            for e in sorted(self.edges, key=DataEdge.sort_key)
        )
        postings = canonical_jsonl(
            {
                "concept": c,
                **{
                    s: base64.b64encode(self.forward.postings[c][s]).decode("ascii")
                    for s in STORES
                },
            }
            for c in sorted(self.forward.postings)
        )
        return {
            "entities.jsonl": entities,
            "edges.jsonl": edges,
            "postings.jsonl": postings,
        }


def _surface_concepts(ontology: OntologyGraph) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for term, entries in ontology.term_index.items():
        out[term] = sorted({cid for cid, _ in entries})
    return out


def materialize_view(
    batches,
    ontology: OntologyGraph,
    min_cooccurrence: int = 1,
    strict_mappings: bool = False,
    extra_edges=(),
) -> ViewSnapshot:
    """Build an immutable snapshot from validated source batches.

    With ``strict_mappings`` a surface string that maps to more than one
    concept within a store raises :class:`MappingConflict`; otherwise the
    string is left out of the (partial) reverse mapping while the forward
    posting lists keep all candidate concepts.
    """
    batches = tuple(batches)
    entities: dict[str, EntityRecord] = {}
    # per-store: normalized surface -> set of member entity ids
    surfaces: dict[str, dict[str, set[str]]] = {s: {} for s in STORES}
    text_docs: dict[str, frozenset[str]] = {}

    def entity(eid: str, kind: str, name: str) -> EntityRecord:
        rec = entities.get(eid)
        if rec is None:
            rec = EntityRecord(eid, kind, {"name": name})
            entities[eid] = rec
        elif name < rec.properties["name"]:
            rec.properties["name"] = name  # keep smallest surface for determinism
        return rec

    def bump(rec: EntityRecord, prop: str, amount=1):
        rec.properties[prop] = rec.properties.get(prop, 0) + amount

    def add_surface(store: str, surface: str, eid: str):
        surfaces[store].setdefault(normalize_term(surface), set()).add(eid)

    for batch in batches:
        for rec in batch.records:
            if isinstance(rec, PatentRecord):
                pid = f"patent:{rec.patent_id}"
                entities[pid] = EntityRecord(
                    pid,
                    "Patent",
                    {
                        "name": rec.title or rec.patent_id,
                        "grant_date": rec.grant_date.isoformat(),
                        "assignee_count": len(rec.assignees),
                    },
                )
                add_surface("table", rec.title or rec.patent_id, pid)
                doc_surfaces = set()
                for term in rec.technology_terms:
                    tid = tech_id(term)
                    entity(tid, "Technology", term)
                    add_surface("table", term, pid)
                    add_surface("table", term, tid)
                    add_surface("graph", term, tid)
                    doc_surfaces.add(normalize_term(term))
                for a in rec.assignees:
                    oid = org_id(a)
                    o = entity(oid, "Organization", a)
                    bump(o, "patent_count")
                    add_surface("table", a, oid)
                    add_surface("graph", a, oid)
                text_docs[pid] = frozenset(doc_surfaces)
            elif isinstance(rec, NewsDocument):
                did = f"doc:{rec.doc_id}"
                entities[did] = EntityRecord(
                    did,
                    "Document",
                    {
                        "name": rec.doc_id,
                        "publish_date": rec.publish_date.isoformat(),
                        "mention_count": len(rec.mentions),
                    },
                )
                doc_surfaces = set()
                for surface, kind, _, _ in rec.mentions:
                    doc_surfaces.add(normalize_term(surface))
                    add_surface("table", surface, did)
                    if kind == "technology":
                        tid = tech_id(surface)
                        entity(tid, "Technology", surface)
                        add_surface("table", surface, tid)
                        add_surface("graph", surface, tid)
                    elif kind == "organization":
                        oid = org_id(surface)
                        o = entity(oid, "Organization", surface)
                        bump(o, "news_mentions")
                        add_surface("table", surface, oid)
                        add_surface("graph", surface, oid)
                text_docs[did] = frozenset(doc_surfaces)
            elif isinstance(rec, FundingRecord):
                aid = f"award:{rec.award_id}"
                entities[aid] = EntityRecord(
                    aid,
                    "Award",
                    {
                        "name": rec.award_id,
                        "amount": rec.amount,
                        "start_date": rec.start_date.isoformat(),
                    },
                )
                o = entity(org_id(rec.recipient), "Organization", rec.recipient)
                bump(o, "award_total", rec.amount)
                add_surface("table", rec.recipient, aid)
                add_surface("table", rec.recipient, org_id(rec.recipient))
                add_surface("graph", rec.recipient, org_id(rec.recipient))
                for term in rec.technology_terms:
                    tid = tech_id(term)
                    entity(tid, "Technology", term)
                    add_surface("table", term, aid)
                    add_surface("table", term, tid)
                    add_surface("graph", term, tid)
            elif isinstance(rec, PartnershipRecord):
                for name in (rec.org_a, rec.org_b):
                    o = entity(org_id(name), "Organization", name)
                    add_surface("table", name, org_id(name))
                    add_surface("graph", name, org_id(name))
                bump(entities[org_id(rec.org_a)], "partnership_count")
                bump(entities[org_id(rec.org_b)], "partnership_count")

    edges: list[DataEdge] = []
    for batch in batches:
        edges.extend(derive_relationships(batch, min_cooccurrence=min_cooccurrence))
    edges.extend(extra_edges)
    edges.sort(key=DataEdge.sort_key)
    for e in edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in entities:
                raise OrphanEdge(f"edge references unknown entity {endpoint!r}")

    created_at = max((e.timestamp for e in edges), default=date(1970, 1, 1))

    table_ids = {eid: i for i, eid in enumerate(sorted(entities))}
    graph_nodes = sorted({e.src for e in edges} | {e.dst for e in edges})
    graph_ids = {eid: i for i, eid in enumerate(graph_nodes)}
    text_ids = {eid: i for i, eid in enumerate(sorted(text_docs))}

    concept_terms = _surface_concepts(ontology)

    # forward postings: per concept, instances whose surfaces carry the concept
    member_ids: dict[str, dict[str, set[int]]] = {}
    for store, id_map, members in (
        ("table", table_ids, surfaces["table"]),
        ("graph", graph_ids, surfaces["graph"]),
    ):
        for surface, eids in members.items():
            for concept in concept_terms.get(surface, ()):
                bucket = member_ids.setdefault(concept, {s: set() for s in STORES})
                for eid in eids:
                    if eid in id_map:
                        bucket[store].add(id_map[eid])
    for did, doc_surfaces in text_docs.items():
        for surface in doc_surfaces:
            for concept in concept_terms.get(surface, ()):
                bucket = member_ids.setdefault(concept, {s: set() for s in STORES})
                bucket["text"].add(text_ids[did])

    forward = ForwardMapping(
        postings={
            concept: {s: encode_postings(sorted(ids[s])) for s in STORES}
            for concept, ids in member_ids.items()
        }
    )

    reverse_by_store: dict[str, dict[str, str]] = {s: {} for s in STORES}
    store_surfaces = {
        "table": set(surfaces["table"]),
        "graph": set(surfaces["graph"]),
        "text": {s for doc in text_docs.values() for s in doc},
    }
    for store, present in store_surfaces.items():
        for surface in sorted(present):
            concepts = concept_terms.get(surface, ())
            if len(concepts) == 1:
                reverse_by_store[store][surface] = concepts[0]
            elif len(concepts) > 1 and strict_mappings:
                raise MappingConflict(
                    f"surface {surface!r} maps to {list(concepts)} in store {store!r}"
                )

    return ViewSnapshot(
        entities=entities,
        edges=edges,
        text_docs=text_docs,
        forward=forward,
        reverse=ReverseMapping(by_store=reverse_by_store),
        batches=batches,
        created_at=created_at,
    )


def refresh(snapshot: ViewSnapshot, delta_batches, ontology: OntologyGraph, **kw) -> ViewSnapshot:
    """Full rebuild over old + delta batches; the old snapshot stays valid."""
    return materialize_view(snapshot.batches + tuple(delta_batches), ontology, **kw)
