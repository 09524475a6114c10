"""Data-directory orchestration shared by the CLI and the HTTP service.

A workspace owns one current snapshot (rebuilt deterministically from the
registered source files), the ontology, a cached temporal community index,
and the persisted landscape bundles. Landscapes and region graphs survive
restarts; materialize/refresh runs are serialized through a single writer
lock while readers keep using the previous snapshot.
"""

from __future__ import annotations

import json
import threading
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from . import analytics
from .errors import MissingSnapshot, UnknownLandscape
from .gap import ConditionSet, GapQuery, GapResult, run_gap
from .ingest import load_source
from .landscape import (
    Landscape,
    landscape_from_bundle,
    landscape_to_bundle,
    run_landscape,
)
from .ontology import ExpansionQuery, OntologyGraph, load_ontology
from .stores import ViewSnapshot, materialize_view
from .util import canonical_json


def parse_view_config(path) -> dict:
    """view.toml: ontology path + [[sources]] entries, relative to the file."""
    path = Path(path)
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    base = path.parent
    return {
        "ontology": str((base / doc["ontology"]).resolve()),
        "sources": [
            {"kind": s["kind"], "path": str((base / s["path"]).resolve())}
            for s in doc.get("sources", ())
        ],
    }


class Workspace:
    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        (self.data_dir / "landscapes").mkdir(exist_ok=True)
        (self.data_dir / "snapshots").mkdir(exist_ok=True)
        self._write_lock = threading.Lock()
        self._ontology: OntologyGraph | None = None
        self._snapshot: ViewSnapshot | None = None
        self._index = None
        self._landscapes: dict[str, Landscape] = {}
        self._restore()

    # --- configuration ------------------------------------------------------

    @property
    def _config_path(self) -> Path:
        return self.data_dir / "workspace.json"

    def _restore(self):
        if self._config_path.exists():
            cfg = json.loads(self._config_path.read_text(encoding="utf-8"))
            self._materialize(cfg["ontology"], cfg["sources"])

    def materialize_from_config(self, view_config_path) -> ViewSnapshot:
        cfg = parse_view_config(view_config_path)
        snapshot = self._materialize(cfg["ontology"], cfg["sources"])
        self._config_path.write_text(
            canonical_json(cfg) + "\n", encoding="utf-8"
        )
        return snapshot

    def _materialize(self, ontology_path, sources) -> ViewSnapshot:
        with self._write_lock:
            ontology = load_ontology(ontology_path)
            batches = [load_source(s["kind"], s["path"]) for s in sources]
            snapshot = materialize_view(batches, ontology)
            dump_dir = self.data_dir / "snapshots" / snapshot.snapshot_id
            dump_dir.mkdir(parents=True, exist_ok=True)
            for name, content in snapshot.dumps().items():
                (dump_dir / name).write_text(content, encoding="utf-8")
            # atomic swap: readers of the old snapshot are unaffected
            self._ontology = ontology
            self._snapshot = snapshot
            self._index = None
        return snapshot

    # --- accessors -------------------------------------------------------------

    @property
    def ontology(self) -> OntologyGraph:
        if self._ontology is None:
            raise MissingSnapshot("no materialized view; run materialize first")
        return self._ontology

    @property
    def snapshot(self) -> ViewSnapshot:
        if self._snapshot is None:
            raise MissingSnapshot("no materialized view; run materialize first")
        return self._snapshot

    @property
    def temporal_index(self):
        if self._index is None:
            self._index = analytics.build_temporal_index(self.snapshot)
        return self._index

    # --- pipeline entry points ---------------------------------------------

    def expand(self, pos, neg=(), max_depth=8) -> list[str]:
        query = ExpansionQuery(pos=tuple(pos), neg=tuple(neg), max_depth=max_depth)
        return sorted(self.ontology.expand_query(query))

    def run_landscape(self, pos, neg=(), params=None) -> Landscape:
        scape = run_landscape(
            self.ontology,
            self.snapshot,
            pos=pos,
            neg=neg,
            params=params,
            index=self.temporal_index,
        )
        bundle = landscape_to_bundle(scape)
        path = self.data_dir / "landscapes" / f"{scape.landscape_id}.json"
        with self._write_lock:
            path.write_text(canonical_json(bundle) + "\n", encoding="utf-8")
            self._landscapes[scape.landscape_id] = scape
        return scape

    def get_landscape(self, landscape_id: str) -> Landscape:
        if landscape_id in self._landscapes:
            return self._landscapes[landscape_id]
        path = self.data_dir / "landscapes" / f"{landscape_id}.json"
        if not path.exists():
            raise UnknownLandscape(landscape_id)
        scape = landscape_from_bundle(json.loads(path.read_text(encoding="utf-8")))
        self._landscapes[landscape_id] = scape
        return scape

    def landscape_bundle(self, landscape_id: str) -> dict:
        return landscape_to_bundle(self.get_landscape(landscape_id))

    def list_landscapes(self) -> list[str]:
        return sorted(
            p.stem for p in (self.data_dir / "landscapes").glob("*.json")
        )

    def run_gap(self, query: GapQuery) -> GapResult:
        scape = self.get_landscape(query.landscape_id)
        return run_gap(scape, self.snapshot, query)
