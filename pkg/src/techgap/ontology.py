"""Ontology as a labeled DAG with root-to-node path labels.

The ontology holds concept nodes connected by three transitive relations
(subclassOf, componentOf, subpropertyOf). Each relation's subgraph must be a
DAG; subpropertyOf must additionally form a tree. Every node carries
root-to-node path labels; nodes with several parents also carry short suffix
labels starting at the parent of the nearest join node. Reachability and
query expansion are answered from the labels (via a memoized label walk),
never by traversing the relation edges at query time.

Ontology document format (JSON, "format": 1):

    {
      "format": 1,
      "nodes": [{"id": "...", "label": "...", "synonyms": [...], "kind": "class"}],
      "edges": [{"parent": "...", "child": "...", "relation": "subclassOf"}]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CycleDetected,
    DanglingEdge,
    DuplicateConceptId,
    EmptyExpansion,
    OntologyFormatError,
    UnknownConcept,
    UnknownTerm,
)
from .util import normalize_term

RELATIONS = ("subclassOf", "componentOf", "subpropertyOf")
#: relations followed by query expansion unless a mask says otherwise
DEFAULT_EXPANSION_RELATIONS = ("subclassOf", "componentOf")
DEFAULT_MAX_DEPTH = 8


@dataclass(frozen=True)
class ConceptNode:
    concept_id: str
    preferred_label: str
    synonyms: tuple[str, ...] = ()
    node_kind: str = "class"  # class | individual

    def __post_init__(self):
        if not self.preferred_label:
            raise OntologyFormatError(f"{self.concept_id}: empty preferred_label")
        if self.node_kind not in ("class", "individual"):
            raise OntologyFormatError(f"{self.concept_id}: bad kind {self.node_kind!r}")
        if len(set(self.synonyms)) != len(self.synonyms):
            raise OntologyFormatError(f"{self.concept_id}: duplicate synonyms")
        if self.preferred_label in self.synonyms:
            raise OntologyFormatError(
                f"{self.concept_id}: preferred_label repeated in synonyms"
            )

    @property
    def terms(self) -> tuple[str, ...]:
        return (self.preferred_label,) + self.synonyms


@dataclass(frozen=True)
class OntologyEdge:
    parent: str
    child: str
    relation: str

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise OntologyFormatError(f"unsupported relation {self.relation!r}")


@dataclass(frozen=True)
class PathLabel:
    node: str
    relation: str
    path: tuple[str, ...]  # starts at a root or at the parent of a join node


@dataclass(frozen=True)
class ExpansionQuery:
    pos: tuple[str, ...]
    neg: tuple[str, ...] = ()
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if not self.pos:
            raise OntologyFormatError("pos terms must be nonempty")
        if self.max_depth < 0:
            raise OntologyFormatError("max_depth must be nonnegative")
        pos_n = {normalize_term(t) for t in self.pos}
        neg_n = {normalize_term(t) for t in self.neg}
        if pos_n & neg_n:
            raise OntologyFormatError("pos and neg terms overlap after normalization")


class OntologyGraph:
    """Immutable after construction; safe for concurrent readers."""

    def __init__(self, nodes: list[ConceptNode], edges: list[OntologyEdge]):
        self.nodes: dict[str, ConceptNode] = {}
        for n in nodes:
            if n.concept_id in self.nodes:
                raise DuplicateConceptId(n.concept_id)
            self.nodes[n.concept_id] = n
        self.edges = tuple(sorted(set(edges), key=lambda e: (e.relation, e.parent, e.child)))
        self._parents: dict[str, dict[str, tuple[str, ...]]] = {}
        self._children: dict[str, dict[str, tuple[str, ...]]] = {}
        for rel in RELATIONS:
            parents: dict[str, list[str]] = {cid: [] for cid in self.nodes}
            children: dict[str, list[str]] = {cid: [] for cid in self.nodes}
            for e in self.edges:
                if e.relation != rel:
                    continue
                if e.parent not in self.nodes or e.child not in self.nodes:
                    raise DanglingEdge(f"{e.parent} -> {e.child} ({rel})")
                parents[e.child].append(e.parent)
                children[e.parent].append(e.child)
            self._parents[rel] = {v: tuple(sorted(set(ps))) for v, ps in parents.items()}
            self._children[rel] = {v: tuple(sorted(set(cs))) for v, cs in children.items()}
            self._check_acyclic(rel)
        for v, ps in self._parents["subpropertyOf"].items():
            if len(ps) > 1:
                raise OntologyFormatError(
                    f"subpropertyOf must be a tree; {v} has parents {list(ps)}"
                )
        self.labels: dict[str, dict[str, tuple[PathLabel, ...]]] = {
            rel: self._build_labels(rel) for rel in RELATIONS
        }
        self.term_index: dict[str, tuple[tuple[str, tuple[PathLabel, ...]], ...]] = (
            self._build_term_index()
        )
        # ancestor -> min hop distance, derived purely from labels
        self._anc_dist: dict[str, dict[str, dict[str, int]]] = {
            rel: self._ancestor_distances(rel) for rel in RELATIONS
        }

    # --- construction -------------------------------------------------------

    def _check_acyclic(self, rel: str) -> None:
        indeg = {v: len(self._parents[rel][v]) for v in self.nodes}
        queue = sorted(v for v, d in indeg.items() if d == 0)
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for c in self._children[rel][v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        if seen != len(self.nodes):
            witness = sorted(v for v, d in indeg.items() if d > 0)
            raise CycleDetected(rel, witness)

    def _topo_order(self, rel: str) -> list[str]:
        indeg = {v: len(self._parents[rel][v]) for v in self.nodes}
        order, frontier = [], sorted(v for v, d in indeg.items() if d == 0)
        while frontier:
            v = frontier.pop(0)
            order.append(v)
            for c in self._children[rel][v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    frontier.append(c)
            frontier.sort()
        return order

    def _build_labels(self, rel: str) -> dict[str, tuple[PathLabel, ...]]:
        parents = self._parents[rel]
        tree_path: dict[str, tuple[str, ...]] = {}
        roots_of: dict[str, set[str]] = {}
        root_path: dict[str, dict[str, tuple[str, ...]]] = {}
        for v in self._topo_order(rel):
            ps = parents[v]
            if not ps:
                tree_path[v] = (v,)
                roots_of[v] = {v}
                root_path[v] = {v: (v,)}
            else:
                # tree parent = lexicographically smallest parent
                tree_path[v] = tree_path[ps[0]] + (v,)
                roots_of[v] = set()
                root_path[v] = {}
                for p in ps:
                    for r in roots_of[p]:
                        if r not in root_path[v]:
                            root_path[v][r] = root_path[p][r] + (v,)
                        roots_of[v].add(r)
        labels: dict[str, tuple[PathLabel, ...]] = {}
        for v in self.nodes:
            out = [PathLabel(v, rel, tree_path[v])]
            for r in sorted(roots_of[v]):
                path = root_path[v][r]
                if path != tree_path[v]:
                    out.append(PathLabel(v, rel, path))
            # v is a join node when it has >1 parent; for each non-tree
            # parent keep a suffix path starting at that parent.
            for p in parents[v][1:]:
                out.append(PathLabel(v, rel, (p, v)))
            labels[v] = tuple(out)
        return labels

    def _build_term_index(self):
        index: dict[str, list[tuple[str, tuple[PathLabel, ...]]]] = {}
        for cid in sorted(self.nodes):
            node = self.nodes[cid]
            refs = tuple(
                lbl for rel in RELATIONS for lbl in self.labels[rel][cid]
            )
            for term in node.terms:
                index.setdefault(normalize_term(term), []).append((cid, refs))
        return {t: tuple(entries) for t, entries in index.items()}

    def _ancestor_distances(self, rel: str) -> dict[str, dict[str, int]]:
        """Shortest ancestor distances, folded out of the path labels.

        Every parent edge of a node is the last hop of one of its labels, so
        chaining label segments reaches every ancestor along shortest paths.
        """
        dist: dict[str, dict[str, int]] = {}
        for v in self._topo_order(rel):
            d: dict[str, int] = {}
            for lbl in self.labels[rel][v]:
                path = lbl.path
                k = len(path) - 1
                for i, x in enumerate(path[:-1]):
                    hop = k - i
                    if x != v and (x not in d or hop < d[x]):
                        d[x] = hop
                    for a, da in dist.get(x, {}).items():
                        if a != v and (a not in d or da + hop < d[a]):
                            d[a] = da + hop
            dist[v] = d
        return dist

    # --- queries --------------------------------------------------------

    def resolve_term(self, term: str) -> set[str]:
        entries = self.term_index.get(normalize_term(term), ())
        return {cid for cid, _ in entries}

    def is_descendant(self, anc: str, desc: str, relation: str) -> bool:
        if relation not in RELATIONS:
            raise OntologyFormatError(f"unsupported relation {relation!r}")
        for cid in (anc, desc):
            if cid not in self.nodes:
                raise UnknownConcept(cid)
        if anc == desc:
            return True
        return anc in self._anc_dist[relation][desc]

    def descendants(self, concept: str, relation: str, max_depth=None) -> set[str]:
        if concept not in self.nodes:
            raise UnknownConcept(concept)
        out = {concept}
        table = self._anc_dist[relation]
        for v in self.nodes:
            d = table[v].get(concept)
            if d is not None and (max_depth is None or d <= max_depth):
                out.add(v)
        return out

    def expand_query(
        self,
        query: ExpansionQuery,
        relations=DEFAULT_EXPANSION_RELATIONS,
        neg_max_depth=None,
    ) -> set[str]:
        """Positive closure (depth-limited) minus negative closure (unbounded
        by default). Expansion is the union of the per-relation closures."""
        def seeds(terms):
            out = set()
            for t in terms:
                concepts = self.resolve_term(t)
                if not concepts:
                    raise UnknownTerm(t)
                out |= concepts
            return out

        pos_closure: set[str] = set()
        for seed in seeds(query.pos):
            for rel in relations:
                pos_closure |= self.descendants(seed, rel, query.max_depth)
        neg_closure: set[str] = set()
        for seed in seeds(query.neg):
            for rel in relations:
                neg_closure |= self.descendants(seed, rel, neg_max_depth)
        result = pos_closure - neg_closure
        if not result:
            raise EmptyExpansion(
                "positive expansion fully subtracted by negative terms"
            )
        return result

    def parents_of(self, concept: str, relation: str) -> tuple[str, ...]:
        return self._parents[relation][concept]

    def children_of(self, concept: str, relation: str) -> tuple[str, ...]:
        return self._children[relation][concept]


def load_ontology(source) -> OntologyGraph:
    """Load an ontology document from a path, file object, or parsed dict."""
    if isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    elif isinstance(source, dict):
        doc = source
    else:
        doc = json.load(source)
    if doc.get("format") != 1:
        raise OntologyFormatError(f"unsupported ontology format {doc.get('format')!r}")
    nodes = [
        ConceptNode(
            concept_id=n["id"],
            preferred_label=n["label"],
            synonyms=tuple(n.get("synonyms", ())),
            node_kind=n.get("kind", "class"),
        )
        for n in doc.get("nodes", ())
    ]
    edges = [
        OntologyEdge(parent=e["parent"], child=e["child"], relation=e["relation"])
        for e in doc.get("edges", ())
    ]
    return OntologyGraph(nodes, edges)
