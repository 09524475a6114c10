"""Gap analysis: competitor mining outside the reference org's ego network.

The flow: drop the reference organization's ego network from the materialized
region graph, enumerate quasi-cliques of dense activity, then keep only the
organizations that pass the organization rules, whose cliques pass the clique
rules, and whose KPI distance from the reference exceeds the threshold. Every
predicate evaluation is retained in a trace so each inclusion or exclusion
can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import date

from .analytics import (
    DEFAULT_GAMMA,
    DEFAULT_MIN_CLIQUE,
    QuasiClique,
    ego_network,
    quasi_cliques,
)
from .errors import DimensionMismatch, UnknownOrganization
from .ingest import org_id
from .landscape import METRICS, Landscape, kpi_vectors
from .stores import ViewSnapshot

COMPARATORS = ("<", "<=", "=", ">=", ">", "contains")
#: minimum worksOn links to clique technologies for participation
PARTICIPATION_MIN_TECH_LINKS = 2


@dataclass(frozen=True)
class Predicate:
    field: str
    comparator: str
    value: object

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.comparator!r}")

    def evaluate(self, props: dict) -> tuple[bool, str]:
        if self.field not in props:
            return False, f"{self.field} missing (fails closed)"
        actual = props[self.field]
        try:
            if self.comparator == "contains":
                ok = str(self.value) in str(actual)
            elif self.comparator == "<":
                ok = actual < self.value
            elif self.comparator == "<=":
                ok = actual <= self.value
            elif self.comparator == "=":
                ok = actual == self.value
            elif self.comparator == ">=":
                ok = actual >= self.value
            else:
                ok = actual > self.value
        except TypeError:
            return False, f"{self.field}: type mismatch (fails closed)"
        return ok, f"{self.field} {self.comparator} {self.value!r} -> {ok} (actual {actual!r})"

    def as_dict(self) -> dict:
        return {"field": self.field, "comparator": self.comparator, "value": self.value}


@dataclass
class ConditionSet:
    org_rules: tuple[Predicate, ...] = ()
    clique_rules: tuple[Predicate, ...] = ()

    @staticmethod
    def from_dict(d: dict) -> "ConditionSet":
        def parse(rules):
            return tuple(
                Predicate(r["field"], r["comparator"], r["value"]) for r in rules
            )

        return ConditionSet(
            org_rules=parse(d.get("org_rules", ())),
            clique_rules=parse(d.get("clique_rules", ())),
        )

    def as_dict(self) -> dict:
        return {
            "org_rules": [p.as_dict() for p in self.org_rules],
            "clique_rules": [p.as_dict() for p in self.clique_rules],
        }


@dataclass(frozen=True)
class GapQuery:
    landscape_id: str
    me: str
    theta: float
    cond: ConditionSet = field(default_factory=ConditionSet)
    ego_radius: int = 1
    gamma: float = DEFAULT_GAMMA
    min_clique_size: int = DEFAULT_MIN_CLIQUE

    def __post_init__(self):
        if self.theta < 0:
            raise ValueError("theta must be nonnegative")


@dataclass
class GapEntry:
    org: str
    org_name: str
    kpis: dict
    distance: float
    cliques: list[QuasiClique]
    trace: list[dict]


@dataclass
class GapResult:
    query: dict
    entries: list[GapEntry]
    excluded: list[dict]  # per-org traces for orgs that were filtered out

    @property
    def org_ids(self) -> list[str]:
        return [e.org for e in self.entries]

    def as_dict(self) -> dict:
        def clique_dict(q: QuasiClique, newest):
            return {
                "nodes": list(q.nodes),
                "gamma": q.gamma,
                "organizations": list(q.organizations),
                "technologies": list(q.technologies),
                "newest_activity": newest.get(q.nodes, None),
            }

        return {
            "query": self.query,
            "results": [
                {
                    "org": e.org,
                    "org_name": e.org_name,
                    "kpis": e.kpis,
                    "distance": e.distance,
                    "cliques": [
                        clique_dict(q, self._newest) for q in e.cliques
                    ],
                    "trace": e.trace,
                }
                for e in self.entries
            ],
            "excluded": self.excluded,
        }

    _newest: dict = None  # set by run_gap


def o_rule(props: dict, rules) -> tuple[bool, list[dict]]:
    """Conjunction of org predicates; missing fields fail closed."""
    trace = []
    ok = True
    for rule in rules:
        passed, note = rule.evaluate(props)
        trace.append({"rule": "org", **rule.as_dict(), "passed": passed, "note": note})
        ok = ok and passed
    return ok, trace


def clique_aggregates(q: QuasiClique, edges, as_of: date) -> dict:
    """Aggregates the clique rules range over."""
    members = set(q.nodes)
    newest = None
    for e in edges:
        if e.src in members and e.dst in members:
            if newest is None or e.timestamp > newest:
                newest = e.timestamp
    age_days = (as_of - newest).days if newest else None
    return {
        "member_count": len(q.nodes),
        "org_count": len(q.organizations),
        "tech_count": len(q.technologies),
        "newest_activity": newest.isoformat() if newest else None,
        "newest_activity_age_days": age_days,
    }


def t_rule(cliques, rules, edges, as_of: date) -> tuple[list[QuasiClique], list[dict]]:
    """Keep cliques whose aggregates satisfy every clique predicate."""
    kept = []
    trace = []
    for q in cliques:
        aggregates = clique_aggregates(q, edges, as_of)
        ok = True
        for rule in rules:
            passed, note = rule.evaluate(aggregates)
            trace.append(
                {
                    "rule": "clique",
                    "clique": list(q.nodes),
                    **rule.as_dict(),
                    "passed": passed,
                    "note": note,
                }
            )
            ok = ok and passed
        if ok:
            kept.append(q)
    return kept, trace


def metric_maxima(vectors: dict[str, tuple[float, ...]]) -> tuple[float, ...]:
    if not vectors:
        return tuple(0.0 for _ in METRICS)
    return tuple(max(v[i] for v in vectors.values()) for i in range(len(METRICS)))


def kpi_distance(a, b, maxima) -> float:
    """Euclidean distance after per-metric max normalization.

    Metrics whose landscape-wide maximum is zero contribute nothing, so the
    ranking is invariant under uniform scaling of the raw KPI table.
    """
    if len(a) != len(b) or len(a) != len(maxima):
        raise DimensionMismatch(f"{len(a)} vs {len(b)} vs {len(maxima)}")
    total = 0.0
    for x, y, m in zip(a, b, maxima):
        if m > 0:
            total += ((x - y) / m) ** 2
    return math.sqrt(total)


def _participates(org: str, clique: QuasiClique, works_on: dict[str, set[str]]) -> bool:
    if org in clique.nodes:
        return True
    techs = set(clique.technologies)
    return len(works_on.get(org, set()) & techs) >= PARTICIPATION_MIN_TECH_LINKS


def run_gap(
    landscape: Landscape,
    snapshot: ViewSnapshot,
    query: GapQuery,
) -> GapResult:
    """Execute the gap filter chain over the landscape's region graph."""
    # accept either an entity id or a raw organization name
    if query.me not in snapshot.entities:
        resolved = org_id(query.me)
        if resolved not in snapshot.entities:
            raise UnknownOrganization(query.me)
        query = replace(query, me=resolved)

    # partnership graph adjacency for the ego network
    c_adj: dict[str, set[str]] = {o: set() for o in landscape.org_nodes}
    for e in landscape.org_edges:
        c_adj[e["a"]].add(e["b"])
        c_adj[e["b"]].add(e["a"])
    if query.me in c_adj:
        ego = ego_network(c_adj, query.me, radius=query.ego_radius)
    else:
        ego = {query.me}

    g_adj: dict[str, set[str]] = {n: set() for n in landscape.g_nodes}
    works_on: dict[str, set[str]] = {}
    for e in landscape.g_edges:
        g_adj[e.src].add(e.dst)
        g_adj[e.dst].add(e.src)
        if e.edge_kind == "worksOn":
            works_on.setdefault(e.src, set()).add(e.dst)

    node_kinds = {
        n: snapshot.entities[n].entity_kind for n in landscape.g_nodes
    }
    tech_entities = {n for n, k in node_kinds.items() if k == "Technology"}
    cliques = quasi_cliques(
        g_adj,
        gamma=query.gamma,
        min_size=query.min_clique_size,
        node_kinds=node_kinds,
    )

    survivors = set(landscape.g_nodes) - ego
    comp = sorted(
        o for o in landscape.orgs if o in survivors and o != query.me
    )

    roi_techs = {
        c
        for c in landscape.techs
    }
    window = landscape.provenance.get("params", {}).get("history")
    vectors = kpi_vectors(landscape, techs=roi_techs, window=window)
    maxima = metric_maxima(vectors)
    me_vec = vectors.get(query.me, tuple(0.0 for _ in METRICS))

    newest: dict[tuple, str] = {}
    for q in cliques:
        agg = clique_aggregates(q, landscape.g_edges, snapshot.created_at)
        newest[q.nodes] = agg["newest_activity"]

    entries: list[GapEntry] = []
    excluded: list[dict] = []
    for org in comp:
        trace: list[dict] = []
        org_cliques = [q for q in cliques if _participates(org, q, works_on)]
        if not org_cliques:
            excluded.append(
                {"org": org, "reason": "no quasi-clique participation", "trace": trace}
            )
            continue
        props = dict(snapshot.entities[org].properties)
        props.update(
            {m: v for m, v in zip(METRICS, vectors.get(org, ()))}
        )
        ok, org_trace = o_rule(props, query.cond.org_rules)
        trace.extend(org_trace)
        if not ok:
            excluded.append({"org": org, "reason": "org rule failed", "trace": trace})
            continue
        kept, clique_trace = t_rule(
            org_cliques, query.cond.clique_rules, landscape.g_edges, snapshot.created_at
        )
        trace.extend(clique_trace)
        if not kept:
            excluded.append(
                {"org": org, "reason": "all cliques filtered", "trace": trace}
            )
            continue
        vec = vectors.get(org, tuple(0.0 for _ in METRICS))
        distance = kpi_distance(vec, me_vec, maxima)
        trace.append(
            {
                "rule": "kpi_distance",
                "value": distance,
                "theta": query.theta,
                "passed": distance > query.theta,
            }
        )
        if not distance > query.theta:
            excluded.append(
                {"org": org, "reason": "kpi distance below theta", "trace": trace}
            )
            continue
        entries.append(
            GapEntry(
                org=org,
                org_name=snapshot.entities[org].properties.get("name", org),
                kpis={m: v for m, v in zip(METRICS, vec)},
                distance=distance,
                cliques=kept,
                trace=trace,
            )
        )

    entries.sort(key=lambda e: (-e.distance, e.org))
    result = GapResult(
        query={
            "landscape_id": query.landscape_id,
            "me": query.me,
            "theta": query.theta,
            "cond": query.cond.as_dict(),
            "ego_radius": query.ego_radius,
            "gamma": query.gamma,
            "min_clique_size": query.min_clique_size,
        },
        entries=entries,
        excluded=excluded,
    )
    result._newest = newest
    return result


def comparative_gap(
    ontology,
    snapshot,
    org: str,
    tech_a: str,
    tech_b: str,
    context_terms=(),
    params: dict | None = None,
    theta: float = 0.0,
    cond: ConditionSet | None = None,
) -> dict:
    """Run the landscape + gap pipeline once per technology and summarize
    the leading organizations plus the reference org's gap magnitude."""
    from .landscape import run_landscape  # local import to avoid a cycle

    if org not in snapshot.entities:
        resolved = org_id(org)
        if resolved not in snapshot.entities:
            raise UnknownOrganization(org)
        org = resolved
    summaries = []
    for tech in (tech_a, tech_b):
        pos = [tech] + [t for t in context_terms if t != tech]
        scape = run_landscape(ontology, snapshot, pos=pos, params=params)
        window = scape.provenance["params"].get("history")
        vectors = kpi_vectors(scape, window=window)
        maxima = metric_maxima(vectors)
        ranked = sorted(
            vectors.items(),
            key=lambda kv: (-sum(x / m for x, m in zip(kv[1], maxima) if m > 0), kv[0]),
        )
        leaders = [
            {
                "org": o,
                "org_name": snapshot.entities[o].properties.get("name", o),
                **{m: v for m, v in zip(METRICS, vec)},
            }
            for o, vec in ranked
        ]
        org_vec = vectors.get(org, tuple(0.0 for _ in METRICS))
        leader_vec = ranked[0][1] if ranked else tuple(0.0 for _ in METRICS)
        gap_entry = {
            "org": org,
            "distance_to_leader": kpi_distance(org_vec, leader_vec, maxima),
            "leader": ranked[0][0] if ranked else None,
        }
        gap_orgs = []
        if org in snapshot.entities:
            gq = GapQuery(
                landscape_id=scape.landscape_id,
                me=org,
                theta=theta,
                cond=cond or ConditionSet(),
            )
            gap_orgs = run_gap(scape, snapshot, gq).org_ids
        summaries.append(
            {
                "tech": tech,
                "landscape_id": scape.landscape_id,
                "leaders": leaders,
                "reference": gap_entry,
                "gap_orgs": gap_orgs,
            }
        )
    return {"org": org, "tech_a": summaries[0], "tech_b": summaries[1]}
