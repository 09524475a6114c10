"""Shared fixtures: a small hand-built ontology, random-graph helpers, and
session-scoped synthetic scenarios with planted structure."""

import json
import random

import pytest

from techgap import (
    GapPlant,
    RoiPlant,
    SyntheticScenario,
    Workspace,
    generate_scenario,
    load_ontology,
)

TOY_ONTOLOGY = {
    "format": 1,
    "nodes": [
        {"id": "technology", "label": "technology", "synonyms": [], "kind": "class"},
        {"id": "computing", "label": "computing", "synonyms": ["information processing"], "kind": "class"},
        {"id": "ml", "label": "machine learning", "synonyms": ["ML"], "kind": "class"},
        {"id": "dl", "label": "deep learning", "synonyms": [], "kind": "class"},
        {"id": "cnn", "label": "convolutional network", "synonyms": ["CNN"], "kind": "class"},
        {"id": "optics", "label": "optics", "synonyms": [], "kind": "class"},
        {"id": "lidar", "label": "lidar", "synonyms": ["laser ranging"], "kind": "class"},
        {"id": "sensor", "label": "sensor", "synonyms": [], "kind": "class"},
    ],
    "edges": [
        {"parent": "technology", "child": "computing", "relation": "subclassOf"},
        {"parent": "technology", "child": "optics", "relation": "subclassOf"},
        {"parent": "computing", "child": "ml", "relation": "subclassOf"},
        {"parent": "ml", "child": "dl", "relation": "subclassOf"},
        {"parent": "dl", "child": "cnn", "relation": "subclassOf"},
        {"parent": "optics", "child": "lidar", "relation": "subclassOf"},
        {"parent": "technology", "child": "sensor", "relation": "subclassOf"},
        # lidar is also a component of sensors: a second relation DAG
        {"parent": "sensor", "child": "lidar", "relation": "componentOf"},
        # diamond: cnn is additionally a direct child of computing
        {"parent": "computing", "child": "cnn", "relation": "subclassOf"},
    ],
}


@pytest.fixture
def toy_ontology():
    return load_ontology(json.loads(json.dumps(TOY_ONTOLOGY)))


def random_dag(rng: random.Random, n_nodes: int, edge_prob: float = 0.15) -> dict:
    """Random DAG over one relation; edges always point old -> new."""
    nodes = [
        {"id": f"c{i}", "label": f"concept {i}", "synonyms": [f"syn {i}"], "kind": "class"}
        for i in range(n_nodes)
    ]
    edges = []
    for j in range(1, n_nodes):
        parents = [i for i in range(j) if rng.random() < edge_prob]
        if not parents and rng.random() < 0.7:
            parents = [rng.randrange(j)]
        for i in parents:
            edges.append({"parent": f"c{i}", "child": f"c{j}", "relation": "subclassOf"})
    return {"format": 1, "nodes": nodes, "edges": edges}


def random_undirected(rng: random.Random, n_nodes: int, edge_prob: float) -> dict:
    adj = {f"n{i}": set() for i in range(n_nodes)}
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if rng.random() < edge_prob:
                adj[f"n{i}"].add(f"n{j}")
                adj[f"n{j}"].add(f"n{i}")
    return adj


def full_scenario_spec() -> SyntheticScenario:
    return SyntheticScenario(roi=RoiPlant(), gap=GapPlant())


def control_scenario_spec() -> SyntheticScenario:
    return SyntheticScenario(roi=RoiPlant(growth=False))


@pytest.fixture(scope="session")
def planted(tmp_path_factory):
    """Generated corpus with both plants, materialized once per session."""
    corpus = tmp_path_factory.mktemp("corpus")
    generate_scenario(full_scenario_spec(), corpus)
    ws = Workspace(tmp_path_factory.mktemp("data"))
    ws.materialize_from_config(corpus / "view.toml")
    ledger = json.loads((corpus / "ledger.json").read_text(encoding="utf-8"))
    return {"corpus": corpus, "workspace": ws, "ledger": ledger}


@pytest.fixture(scope="session")
def gap_landscape(planted):
    """Landscape over the planted gap context, built once per session."""
    ws = planted["workspace"]
    params = planted["ledger"]["gap"]["params"]
    return ws.run_landscape(["sensor fusion"], [], params)


@pytest.fixture(scope="session")
def control(tmp_path_factory):
    """Same region plant with growth disabled: all activity in year one."""
    corpus = tmp_path_factory.mktemp("control-corpus")
    generate_scenario(control_scenario_spec(), corpus)
    ws = Workspace(tmp_path_factory.mktemp("control-data"))
    ws.materialize_from_config(corpus / "view.toml")
    ledger = json.loads((corpus / "ledger.json").read_text(encoding="utf-8"))
    return {"corpus": corpus, "workspace": ws, "ledger": ledger}
