"""Landscape construction tests. The generator's KPI ledger is the oracle
for the performance relation; cube roll-ups are checked for additivity."""

import pytest

from techgap import kpi_cube
from techgap.errors import UnknownDimension
from techgap.landscape import (
    METRICS,
    kpi_vectors,
    landscape_from_bundle,
    landscape_to_bundle,
)


def ledger_cells(ledger, concepts):
    """(org, year, concept) -> metric dict, restricted to a concept set."""
    out = {}
    for org, by_year in ledger["kpi"].items():
        for year, by_concept in by_year.items():
            for concept, metrics in by_concept.items():
                if concept in concepts:
                    out[(org, int(year), concept)] = metrics
    return out


def test_performance_rows_match_ledger(planted, gap_landscape):
    gap = planted["ledger"]["gap"]
    concepts = set(gap["concepts"])
    expected = ledger_cells(planted["ledger"], concepts)
    got = {
        (r.org, r.interval, r.tech): dict(zip(METRICS, r.metrics))
        for r in gap_landscape.rows
        if r.tech in concepts
    }
    assert set(got) == set(expected)
    for key, metrics in expected.items():
        for m in METRICS:
            assert got[key].get(m, 0.0) == pytest.approx(metrics.get(m, 0.0)), (key, m)


def test_landscape_orgs_cover_planted_roles(planted, gap_landscape):
    gap = planted["ledger"]["gap"]
    expected = {gap["me"], *gap["partners"], *gap["competitors"], *gap["weak"]}
    assert expected <= set(gap_landscape.org_nodes)


def test_org_graph_restricted_to_active_orgs(gap_landscape):
    active = {r.org for r in gap_landscape.rows}
    assert set(gap_landscape.org_nodes) == active
    for e in gap_landscape.org_edges:
        assert e["a"] in active and e["b"] in active
        assert e["evidence"] in ("jointPatent", "coAuthorship", "declaredPartnership")
        assert e["count"] >= 1


def test_declared_partnerships_present(planted, gap_landscape):
    gap = planted["ledger"]["gap"]
    declared = {
        tuple(sorted((e["a"], e["b"])))
        for e in gap_landscape.org_edges
        if e["evidence"] == "declaredPartnership"
    }
    for partner in gap["partners"]:
        assert tuple(sorted((gap["me"], partner))) in declared


def test_technology_graph_includes_ontology_fragment(planted, gap_landscape):
    # branch node is a parent of every planted concept, so it must be in T
    assert planted["ledger"]["gap"]["branch"] in gap_landscape.tech_nodes
    labels = {e["label"] for e in gap_landscape.tech_edges}
    assert "subclassOf" in labels
    assert "coOccurrence" in labels


def test_cube_additivity(gap_landscape):
    grand = kpi_cube(gap_landscape, ())[0]
    for dims in [("org",), ("interval",), ("tech",), ("org", "tech"), ("org", "interval", "tech")]:
        rows = kpi_cube(gap_landscape, dims)
        for m in METRICS:
            assert sum(r[m] for r in rows) == pytest.approx(grand[m]), dims


def test_cube_unknown_dimension(gap_landscape):
    with pytest.raises(UnknownDimension):
        kpi_cube(gap_landscape, ("flavor",))


def test_kpi_vectors_window(gap_landscape):
    full = kpi_vectors(gap_landscape)
    recent = kpi_vectors(gap_landscape, window=1)
    for org, vec in recent.items():
        for a, b in zip(vec, full[org]):
            assert a <= b + 1e-9


def test_bundle_roundtrip(gap_landscape):
    bundle = landscape_to_bundle(gap_landscape)
    again = landscape_to_bundle(landscape_from_bundle(bundle))
    assert bundle == again


def test_rerun_reproduces_landscape_id(planted, gap_landscape):
    ws = planted["workspace"]
    params = planted["ledger"]["gap"]["params"]
    rerun = ws.run_landscape(["sensor fusion"], [], params)
    assert rerun.landscape_id == gap_landscape.landscape_id
    assert landscape_to_bundle(rerun) == landscape_to_bundle(gap_landscape)


def test_provenance_records_query(gap_landscape, planted):
    prov = gap_landscape.provenance
    assert prov["pos"] == ["sensor fusion"]
    assert prov["snapshot_id"] == planted["workspace"].snapshot.snapshot_id
    assert set(planted["ledger"]["gap"]["concepts"]) <= set(prov["expansion"])
