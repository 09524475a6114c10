"""Graph metric and mining kernel.

Everything here works on an undirected simple projection of the timestamped
data graph: clustering coefficients, k-truss decomposition, a per-year
cumulative truss index, densifying-region detection, maximal quasi-clique
enumeration, and ego networks. All operations are pure with respect to an
immutable snapshot and return deterministically ordered results.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnknownNode, UnknownOrganization, UnstampedEdge
from .ingest import DataEdge
from .stores import ViewSnapshot

DEFAULT_MIN_NODES = 100
DEFAULT_MIN_CLUST = 0.7
DEFAULT_HISTORY = 5
DEFAULT_GAMMA = 0.8
DEFAULT_MIN_CLIQUE = 3
ROI_MERGE_JACCARD = 0.5


def _norm_edge(u, v):
    return (u, v) if u < v else (v, u)


def clustering_coefficient(node: str, adj: dict[str, set[str]]) -> float:
    """2*triangles / (deg*(deg-1)) on the undirected simple projection."""
    if node not in adj:
        raise UnknownNode(node)
    neigh = adj[node]
    deg = len(neigh)
    if deg < 2:
        return 0.0
    links = sum(len(adj[u] & neigh) for u in neigh) // 2
    return 2.0 * links / (deg * (deg - 1))


def average_clustering(nodes, adj) -> float:
    nodes = list(nodes)
    if not nodes:
        return 0.0
    return sum(clustering_coefficient(n, adj) for n in nodes) / len(nodes)


def induced_adjacency(adj: dict[str, set[str]], nodes) -> dict[str, set[str]]:
    keep = set(nodes)
    return {n: adj.get(n, set()) & keep for n in keep}


def snapshot_adjacency(snapshot: ViewSnapshot, kinds=None) -> dict[str, set[str]]:
    return snapshot.undirected_adjacency(kinds=kinds)


# --- truss decomposition -----------------------------------------------------

def truss_decomposition(adj: dict[str, set[str]]) -> dict[tuple[str, str], int]:
    """Max trussness per edge via support peeling.

    Edge e has trussness k if k is the largest value such that e survives in
    the k-truss (every surviving edge closing >= k-2 triangles).
    """
    adj = {v: set(ns) for v, ns in adj.items()}
    support = {}
    for u in adj:
        for v in adj[u]:
            if u < v:
                support[(u, v)] = len(adj[u] & adj[v])
    truss: dict[tuple[str, str], int] = {}
    heap = [(s, e) for e, s in support.items()]
    heapq.heapify(heap)
    k = 2
    alive = set(support)
    while alive:
        while heap:
            s, e = heap[0]
            if e not in alive or s != support[e]:
                heapq.heappop(heap)
                continue
            if s > k - 2:
                break
            heapq.heappop(heap)
            u, v = e
            truss[e] = k
            alive.discard(e)
            for w in adj[u] & adj[v]:
                for other in (_norm_edge(u, w), _norm_edge(v, w)):
                    if other in alive:
                        support[other] -= 1
                        heapq.heappush(heap, (support[other], other))
            adj[u].discard(v)
            adj[v].discard(u)
        if alive:
            k += 1
    return truss


def k_truss(adj: dict[str, set[str]], k: int) -> set[tuple[str, str]]:
    """Edges of the maximal subgraph where every edge closes >= k-2 triangles."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return {e for e, t in truss_decomposition(adj).items() if t >= k}


# --- temporal community index --------------------------------------------------

@dataclass
class TemporalCommunityIndex:
    buckets: list[int]  # calendar years, ascending
    decompositions: list[dict[tuple[str, str], int]]  # cumulative per bucket

    @property
    def latest(self) -> dict[tuple[str, str], int]:
        return self.decompositions[-1] if self.decompositions else {}


def build_temporal_index(snapshot: ViewSnapshot, kinds=None) -> TemporalCommunityIndex:
    """Per cumulative calendar-year bucket, the full truss decomposition."""
    edges = [e for e in snapshot.edges if kinds is None or e.edge_kind in kinds]
    for e in edges:
        if e.timestamp is None:  # defensive; the type requires a date
            raise UnstampedEdge(f"{e.src} -> {e.dst}")
    if not edges:
        return TemporalCommunityIndex(buckets=[], decompositions=[])
    years = [e.timestamp.year for e in edges]
    buckets = list(range(min(years), max(years) + 1))
    decomps = []
    for year in buckets:
        adj: dict[str, set[str]] = {}
        for e in edges:
            if e.timestamp.year <= year:
                adj.setdefault(e.src, set()).add(e.dst)
                adj.setdefault(e.dst, set()).add(e.src)
        decomps.append(truss_decomposition(adj))
    return TemporalCommunityIndex(buckets=buckets, decompositions=decomps)


# --- densifying regions -----------------------------------------------------

@dataclass
class DensitySeries:
    nodes: tuple[str, ...]
    buckets: list[int]
    node_counts: list[int]
    edge_counts: list[int]
    densities: list[float]


@dataclass
class RoiSubgraph:
    roi_id: str
    nodes: tuple[str, ...]
    edges: tuple[DataEdge, ...]
    seed_concepts: tuple[str, ...]
    params: dict
    density_series: DensitySeries
    avg_clustering: float

    def as_dict(self) -> dict:
        return {
            "roi_id": self.roi_id,
            "nodes": list(self.nodes),
            "edges": [
                {
                    "src": e.src,
                    "dst": e.dst,
                    "edge_kind": e.edge_kind,
                    "timestamp": e.timestamp.isoformat(),
                    "weight": e.weight,
                }
                for e in self.edges
            ],
            "density_series": {
                "buckets": self.density_series.buckets,
                "node_counts": self.density_series.node_counts,
                "edge_counts": self.density_series.edge_counts,
                "densities": self.density_series.densities,
            },
            "params": self.params,
            "seed_concepts": list(self.seed_concepts),
            "avg_clustering": self.avg_clustering,
        }


def density_series(nodes, edges, buckets) -> DensitySeries:
    """Cumulative simple-edge density over a fixed node set, per year bucket."""
    nodes = tuple(sorted(nodes))
    node_set = set(nodes)
    n = len(nodes)
    pairs = n * (n - 1) // 2
    counts, ncounts, dens = [], [], []
    seen_pairs: set[tuple[str, str]] = set()
    touched: set[str] = set()
    by_year: dict[int, list[DataEdge]] = {}
    for e in edges:
        if e.src in node_set and e.dst in node_set:
            by_year.setdefault(e.timestamp.year, []).append(e)
    for year in buckets:
        for e in by_year.get(year, ()):
            seen_pairs.add(_norm_edge(e.src, e.dst))
            touched.update((e.src, e.dst))
        counts.append(len(seen_pairs))
        ncounts.append(len(touched))
        dens.append(len(seen_pairs) / pairs if pairs else 0.0)
    return DensitySeries(nodes, list(buckets), ncounts, counts, dens)


def _densifies(densities: list[float], history: int) -> bool:
    """Non-decreasing with at least one strict increase in the trailing window."""
    window = densities[-history:]
    if len(window) < 2:
        return False
    ok = all(b >= a - 1e-12 for a, b in zip(window, window[1:]))
    strict = any(b > a + 1e-12 for a, b in zip(window, window[1:]))
    return ok and strict


def detect_densifying_regions(
    seeds,
    snapshot: ViewSnapshot,
    min_nodes: int = DEFAULT_MIN_NODES,
    min_clust: float = DEFAULT_MIN_CLUST,
    history: int = DEFAULT_HISTORY,
    index: TemporalCommunityIndex | None = None,
    kinds=None,
    seed_concepts=(),
) -> list[RoiSubgraph]:
    """Grow each seed's maximal truss community (latest bucket) by one hop
    and keep regions passing the size / clustering / densification gates."""
    if index is None:
        index = build_temporal_index(snapshot, kinds=kinds)
    if not index.buckets:
        return []
    latest = index.latest
    adj = snapshot.undirected_adjacency(kinds=kinds)
    incident: dict[str, list[tuple[tuple[str, str], int]]] = {}
    for e, t in latest.items():
        incident.setdefault(e[0], []).append((e, t))
        incident.setdefault(e[1], []).append((e, t))

    candidates: dict[tuple[str, ...], None] = {}
    for seed in sorted(set(seeds)):
        if seed not in incident:
            continue
        k_seed = max(t for _, t in incident[seed])
        # connected component of the seed over edges with trussness >= k_seed
        community = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for e, t in incident.get(v, ()):
                if t < k_seed:
                    continue
                w = e[1] if e[0] == v else e[0]
                if w not in community:
                    community.add(w)
                    frontier.append(w)
        closure = set(community)
        for v in community:
            closure |= adj.get(v, set())
        candidates[tuple(sorted(closure))] = None

    edges = [e for e in snapshot.edges if kinds is None or e.edge_kind in kinds]
    passing = []
    for nodes in candidates:
        if len(nodes) < min_nodes:
            continue
        sub = induced_adjacency(adj, nodes)
        avg_cc = average_clustering(nodes, sub)
        if avg_cc < min_clust:
            continue
        series = density_series(nodes, edges, index.buckets)
        if not _densifies(series.densities, history):
            continue
        passing.append((set(nodes), avg_cc, series))

    # merge overlapping passing regions, then re-verify the gates
    merged: list[set[str]] = []
    for nodes, _, _ in sorted(passing, key=lambda t: sorted(t[0])):
        for group in merged:
            inter = len(group & nodes)
            union = len(group | nodes)
            if union and inter / union > ROI_MERGE_JACCARD:
                group |= nodes
                break
        else:
            merged.append(set(nodes))

    params = {"min_nodes": min_nodes, "min_clust": min_clust, "history": history}
    rois = []
    for i, nodes in enumerate(sorted(merged, key=sorted)):
        node_tuple = tuple(sorted(nodes))
        sub = induced_adjacency(adj, nodes)
        avg_cc = average_clustering(nodes, sub)
        series = density_series(nodes, edges, index.buckets)
        if len(nodes) < min_nodes or avg_cc < min_clust:
            continue
        if not _densifies(series.densities, history):
            continue
        induced = tuple(
            e for e in edges if e.src in nodes and e.dst in nodes
        )
        rois.append(
            RoiSubgraph(
                roi_id=f"roi-{i:03d}",
                nodes=node_tuple,
                edges=induced,
                seed_concepts=tuple(sorted(seed_concepts)),
                params=params,
                density_series=series,
                avg_clustering=avg_cc,
            )
        )
    rois.sort(key=lambda r: (-r.density_series.densities[-1], r.roi_id))
    return rois


# --- quasi-cliques ---------------------------------------------------------

def quasi_clique_min_degree(gamma: float, size: int) -> int:
    """ceil(gamma * (size-1)) with exact arithmetic on the decimal gamma."""
    frac = Fraction(str(gamma))
    return int(-((-frac * (size - 1)) // 1))


@dataclass(frozen=True)
class QuasiClique:
    nodes: tuple[str, ...]
    gamma: float
    organizations: tuple[str, ...] = ()
    technologies: tuple[str, ...] = ()


def quasi_cliques(
    adj: dict[str, set[str]],
    gamma: float = DEFAULT_GAMMA,
    min_size: int = DEFAULT_MIN_CLIQUE,
    node_kinds: dict[str, str] | None = None,
) -> list[QuasiClique]:
    """All maximal gamma-quasi-cliques of size >= min_size.

    Include/exclude branch and bound over a fixed node order. The degree
    bound used for pruning is sound: adding a neighbor of v raises v's
    in-set degree by 1 while raising the requirement by gamma <= 1, so v's
    best case is to add all of its remaining candidate neighbors and
    nothing else.
    """
    if not (0 < gamma <= 1):
        raise ValueError("gamma must be in (0, 1]")
    nodes = sorted(adj)
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    nbr = [0] * n
    for v, ns in adj.items():
        mask = 0
        for u in ns:
            if u != v and u in idx:
                mask |= 1 << idx[u]
        nbr[idx[v]] = mask

    found: list[int] = []

    def satisfied(mask: int) -> bool:
        size = mask.bit_count()
        need = quasi_clique_min_degree(gamma, size)
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if (nbr[v] & mask).bit_count() < need:
                return False
            m ^= low
        return True

    def rec(s_mask: int, i: int):
        remaining = n - i
        size = s_mask.bit_count()
        if size + remaining < min_size:
            return
        undecided = ((1 << n) - 1) >> i << i
        m = s_mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            deg = (nbr[v] & s_mask).bit_count()
            extra = (nbr[v] & undecided).bit_count()
            if deg + extra < quasi_clique_min_degree(gamma, size + extra):
                return
        if i == n:
            if size >= min_size and satisfied(s_mask):
                found.append(s_mask)
            return
        rec(s_mask | (1 << i), i + 1)
        rec(s_mask, i + 1)

    rec(0, 0)

    # keep only maximal sets
    found.sort(key=lambda m: -m.bit_count())
    maximal: list[int] = []
    for m in found:
        if not any(m & keep == m for keep in maximal):
            maximal.append(m)

    out = []
    for m in maximal:
        members = tuple(nodes[i] for i in range(n) if m >> i & 1)
        kinds = node_kinds or {}
        out.append(
            QuasiClique(
                nodes=members,
                gamma=gamma,
                organizations=tuple(
                    v for v in members if kinds.get(v) == "Organization"
                ),
                technologies=tuple(
                    v for v in members if kinds.get(v) == "Technology"
                ),
            )
        )
    out.sort(key=lambda q: q.nodes)
    return out


# --- ego networks -----------------------------------------------------------

def ego_network(adj: dict[str, set[str]], me: str, radius: int = 1) -> set[str]:
    """me plus every node within `radius` hops."""
    if me not in adj:
        raise UnknownOrganization(me)
    seen = {me}
    frontier = {me}
    for _ in range(radius):
        frontier = {w for v in frontier for w in adj[v]} - seen
        seen |= frontier
    return seen
