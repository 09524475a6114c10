"""Acceptance gate. One test per criterion; each prints a PASS line with its
measured runtime and enforces its budget. Oracles are brute force and
independent of the library implementations under test."""

import json
import random
import time
from itertools import combinations

import pytest

from techgap import (
    ConditionSet,
    ExpansionQuery,
    GapQuery,
    Workspace,
    clustering_coefficient,
    detect_densifying_regions,
    generate_scenario,
    k_truss,
    kpi_cube,
    load_ontology,
    quasi_cliques,
    run_gap,
)
from techgap.errors import EmptyExpansion
from techgap.landscape import METRICS

from conftest import control_scenario_spec, full_scenario_spec, random_dag, random_undirected
from test_analytics import oracle_clustering, oracle_k_truss, oracle_quasi_cliques
from test_ontology import bfs_descendants, oracle_expand


class budget:
    """Assert the block finishes inside its runtime budget and report it."""

    def __init__(self, name: str, seconds: float):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            status = "PASS" if elapsed < self.seconds else "FAIL"
            print(f"{status} {self.name}: {elapsed:.2f}s (budget {self.seconds:.0f}s)")
            assert elapsed < self.seconds, f"{self.name} exceeded {self.seconds}s"
        else:
            print(f"FAIL {self.name}: raised after {elapsed:.2f}s")
        return False


def test_query_expansion_oracle_equivalence():
    rng = random.Random(42)
    with budget("query-expansion oracle equivalence (100 random DAGs)", 10):
        for _ in range(100):
            doc = random_dag(rng, rng.randrange(5, 201))
            graph = load_ontology(doc)
            ids = [n["id"] for n in doc["nodes"]]
            pos = rng.sample(ids, rng.randrange(1, 4))
            rest = [i for i in ids if i not in pos]
            neg = rng.sample(rest, min(len(rest), rng.randrange(0, 3)))
            depth = rng.choice([1, 2, 4, 8, 8, 8])
            expected = oracle_expand(doc, pos, neg, depth, ("subclassOf",))
            query = ExpansionQuery(
                pos=tuple(f"concept {p[1:]}" for p in pos),
                neg=tuple(f"concept {n[1:]}" for n in neg),
                max_depth=depth,
            )
            if not expected:
                with pytest.raises(EmptyExpansion):
                    graph.expand_query(query)
            else:
                assert graph.expand_query(query) == expected


def test_reachability_via_path_labels():
    rng = random.Random(7)
    with budget("path-label reachability vs DFS (20 random DAGs)", 5):
        mismatches = 0
        for _ in range(20):
            doc = random_dag(rng, rng.randrange(5, 101))
            graph = load_ontology(doc)
            ids = [n["id"] for n in doc["nodes"]]
            for a in ids:
                reach = bfs_descendants(doc, a, "subclassOf")
                for b in ids:
                    if graph.is_descendant(a, b, "subclassOf") != (b in reach):
                        mismatches += 1
        assert mismatches == 0


def test_truss_and_clustering_oracles():
    rng = random.Random(13)
    with budget("k-truss + clustering vs naive oracles (50 random graphs)", 10):
        for _ in range(50):
            adj = random_undirected(rng, rng.randrange(4, 31), rng.uniform(0.15, 0.75))
            for k in (3, 4, 5):
                assert k_truss(adj, k) == oracle_k_truss(adj, k)
            for n in adj:
                assert clustering_coefficient(n, adj) == pytest.approx(
                    oracle_clustering(n, adj)
                )


def test_quasi_clique_oracle():
    rng = random.Random(23)
    with budget("quasi-cliques vs exhaustive enumeration (30 random graphs)", 60):
        for i in range(30):
            gamma = (0.6, 0.8, 1.0)[i % 3]
            adj = random_undirected(rng, rng.randrange(4, 16), rng.uniform(0.3, 0.9))
            got = {q.nodes for q in quasi_cliques(adj, gamma=gamma, min_size=3)}
            assert got == oracle_quasi_cliques(adj, gamma, 3)


def test_densification_detection(planted, control):
    with budget("densifying-region detection (planted vs control)", 30):
        ws = planted["workspace"]
        roi_ledger = planted["ledger"]["roi"]
        seeds = ws.snapshot.concepts_to_instances(roi_ledger["concepts"])
        rois = detect_densifying_regions(
            seeds, ws.snapshot,
            min_nodes=100, min_clust=0.7, history=5,
            index=ws.temporal_index,
        )
        assert len(rois) >= 1
        planted_nodes = set(roi_ledger["entities"])
        coverage = max(
            len(planted_nodes & set(r.nodes)) / len(planted_nodes) for r in rois
        )
        assert coverage >= 0.90

        cws = control["workspace"]
        c_ledger = control["ledger"]["roi"]
        c_seeds = cws.snapshot.concepts_to_instances(c_ledger["concepts"])
        c_rois = detect_densifying_regions(
            c_seeds, cws.snapshot,
            min_nodes=100, min_clust=0.7, history=5,
            index=cws.temporal_index,
        )
        assert c_rois == []


def test_end_to_end_gap_correctness(planted, gap_landscape):
    with budget("end-to-end gap correctness (planted competitor set)", 30):
        gap = planted["ledger"]["gap"]
        snapshot = planted["workspace"].snapshot

        def orgs_at(theta):
            query = GapQuery(
                landscape_id=gap_landscape.landscape_id,
                me=gap["me"],
                theta=theta,
                cond=ConditionSet(),
            )
            return set(run_gap(gap_landscape, snapshot, query).org_ids)

        assert orgs_at(gap["theta"]) == set(gap["competitors"])
        assert not (set(gap["partners"]) & orgs_at(0.0))
        assert gap["me"] not in orgs_at(0.0)

        previous = None
        for theta in (0.0, 0.2, 0.5, 1.0, float("inf")):
            current = orgs_at(theta)
            if previous is not None:
                assert current <= previous
            previous = current


def test_determinism(tmp_path):
    with budget("full-pipeline determinism (two runs, byte-identical)", 60):
        bundles = []
        for run in ("one", "two"):
            corpus = tmp_path / f"corpus-{run}"
            generate_scenario(full_scenario_spec(), corpus)
            ws = Workspace(tmp_path / f"data-{run}")
            ws.materialize_from_config(corpus / "view.toml")
            ledger = json.loads((corpus / "ledger.json").read_text(encoding="utf-8"))
            scape = ws.run_landscape(
                ["sensor fusion"], [], ledger["gap"]["params"]
            )
            bundle_path = ws.data_dir / "landscapes" / f"{scape.landscape_id}.json"
            query = GapQuery(
                landscape_id=scape.landscape_id,
                me=ledger["gap"]["me"],
                theta=ledger["gap"]["theta"],
            )
            from techgap.util import canonical_json

            bundles.append(
                (
                    ws.snapshot.snapshot_id,
                    "".join(ws.snapshot.dumps().values()),
                    bundle_path.read_bytes(),
                    canonical_json(ws.run_gap(query).as_dict()),
                )
            )
        assert bundles[0] == bundles[1]


def test_cube_consistency(gap_landscape):
    with budget("cube roll-up consistency (all dimension subsets)", 10):
        grand = kpi_cube(gap_landscape, ())[0]
        dims = ("org", "interval", "tech")
        for r in range(len(dims) + 1):
            for subset in combinations(dims, r):
                rows = kpi_cube(gap_landscape, subset)
                for m in METRICS:
                    assert sum(row[m] for row in rows) == pytest.approx(grand[m]), (
                        subset,
                        m,
                    )
