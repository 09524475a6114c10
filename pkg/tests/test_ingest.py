import json
from datetime import date
from math import comb

import pytest

from techgap import derive_relationships, load_source
from techgap.ingest import DataEdge, SourceBatch, org_id, tech_id


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")


PATENT = {
    "patent_id": "p1",
    "title": "Widget",
    "grant_date": "2021-06-01",
    "assignees": ["Acme Corp", "Beta LLC", "Gamma Inc"],
    "technology_terms": ["lidar", "radar"],
}


def test_load_patents_counts_rejections(tmp_path):
    path = tmp_path / "patents.jsonl"
    rows = [
        PATENT,
        {"patent_id": "p2", "grant_date": "not-a-date", "assignees": ["X"]},
        {"patent_id": "p3", "grant_date": "2020-01-01", "assignees": []},
    ]
    write_jsonl(path, rows)
    path.write_text(path.read_text() + "{bad json\n", encoding="utf-8")
    batch = load_source("patents", path)
    assert len(batch.records) == 1
    assert [line for line, _ in batch.rejections] == [2, 3, 4]


def test_load_news_validates_mention_offsets(tmp_path):
    path = tmp_path / "news.jsonl"
    body = "Acme ships lidar."
    write_jsonl(
        path,
        [
            {
                "doc_id": "d1",
                "publish_date": "2021-01-01",
                "body": body,
                "mentions": [
                    {"surface": "Acme", "kind": "organization", "start": 0, "end": 4},
                    {"surface": "lidar", "kind": "technology", "start": 11, "end": 16},
                ],
            },
            {
                "doc_id": "d2",
                "publish_date": "2021-01-01",
                "body": "short",
                "mentions": [
                    {"surface": "x", "kind": "technology", "start": 3, "end": 99}
                ],
            },
        ],
    )
    batch = load_source("news", path)
    assert len(batch.records) == 1
    assert len(batch.rejections) == 1


def test_load_funding_rejects_negative_amount(tmp_path):
    path = tmp_path / "funding.jsonl"
    write_jsonl(
        path,
        [
            {"award_id": "a1", "recipient": "Acme", "amount": -5, "start_date": "2020-02-02"},
            {"award_id": "a2", "recipient": "Acme", "amount": 10.0, "start_date": "2020-02-02"},
        ],
    )
    batch = load_source("funding", path)
    assert len(batch.records) == 1 and batch.rejections[0][0] == 1


def test_load_partnership_rejects_self_edge(tmp_path):
    path = tmp_path / "partnerships.jsonl"
    write_jsonl(
        path,
        [
            {"org_a": "Acme", "org_b": "ACME ", "relation": "jv", "since_date": "2019-05-05"},
            {"org_a": "Acme", "org_b": "Beta", "relation": "jv", "since_date": "2019-05-05"},
        ],
    )
    batch = load_source("partnerships", path)
    assert len(batch.records) == 1
    assert len(batch.rejections) == 1


def test_unknown_source_kind(tmp_path):
    with pytest.raises(ValueError):
        load_source("tweets", tmp_path / "x.jsonl")


def test_data_edge_invariants():
    with pytest.raises(ValueError):
        DataEdge("a", "a", "worksOn", date(2020, 1, 1))
    with pytest.raises(ValueError):
        DataEdge("a", "b", "flies", date(2020, 1, 1))


def test_patent_edge_combinatorics(tmp_path):
    path = tmp_path / "patents.jsonl"
    write_jsonl(path, [PATENT])
    edges = derive_relationships(load_source("patents", path))
    a, t = 3, 2
    by_kind = {}
    for e in edges:
        by_kind.setdefault(e.edge_kind, []).append(e)
    assert len(by_kind["coOwnership"]) == comb(a, 2)
    assert len(by_kind["worksOn"]) == a * t
    assert len(by_kind["coOccurrence"]) == comb(t, 2)
    assert all(e.timestamp == date(2021, 6, 1) for e in edges)


def test_undirected_edges_canonicalized(tmp_path):
    path = tmp_path / "patents.jsonl"
    write_jsonl(path, [PATENT])
    edges = derive_relationships(load_source("patents", path))
    for e in edges:
        if e.edge_kind in ("coOwnership", "coOccurrence"):
            assert e.src < e.dst


def test_entity_ids_normalized():
    assert org_id("  Acme   CORP ") == "org:acme corp"
    assert tech_id("LiDAR") == "tech:lidar"


def test_min_cooccurrence_threshold(tmp_path):
    path = tmp_path / "patents.jsonl"
    rows = [
        dict(PATENT, patent_id="p1", technology_terms=["a", "b"]),
        dict(PATENT, patent_id="p2", technology_terms=["a", "b"]),
        dict(PATENT, patent_id="p3", technology_terms=["a", "c"]),
    ]
    write_jsonl(path, rows)
    batch = load_source("patents", path)
    pairs = {
        (e.src, e.dst)
        for e in derive_relationships(batch, min_cooccurrence=2)
        if e.edge_kind == "coOccurrence"
    }
    assert pairs == {("tech:a", "tech:b")}


def test_transfers_become_ip_transfer_edges(tmp_path):
    path = tmp_path / "patents.jsonl"
    row = dict(PATENT, assignees=["Acme"], transfers=[{"to": "Beta", "date": "2022-03-03"}])
    write_jsonl(path, [row])
    edges = derive_relationships(load_source("patents", path))
    transfers = [e for e in edges if e.edge_kind == "ipTransfer"]
    assert transfers == [
        DataEdge("org:acme", "org:beta", "ipTransfer", date(2022, 3, 3))
    ]


def test_derivation_deterministic_order(tmp_path):
    path = tmp_path / "patents.jsonl"
    write_jsonl(path, [PATENT, dict(PATENT, patent_id="p9", assignees=["Zed", "Acme Corp"])])
    batch = load_source("patents", path)
    once = derive_relationships(batch)
    again = derive_relationships(SourceBatch("patents", list(batch.records)))
    assert once == again
    assert once == sorted(once, key=DataEdge.sort_key)
