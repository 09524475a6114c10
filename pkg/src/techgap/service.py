"""HTTP JSON API over a workspace.

Long-running work (landscape builds) runs through an async job pool with
polling; reads are synchronous. Responses use the same canonical JSON
encoding as the CLI, so pipeline results are byte-identical over both
surfaces. In-flight jobs do not survive a restart; persisted landscapes do.
"""

from __future__ import annotations

import itertools
import os
import threading
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from pydantic import BaseModel

from .charts import CHART_KINDS, chart_payload
from .errors import TechgapError, UnknownLandscape
from .gap import ConditionSet, GapQuery
from .util import canonical_json
from .workspace import Workspace

ENV_PREFIX = "TECHGAP_"

NOT_FOUND_CODES = {
    "UnknownLandscape",
    "UnknownConcept",
    "UnknownOrganization",
    "UnknownChartKind",
    "UnknownNode",
}


@dataclass
class ServiceConfig:
    data_dir: str = "techgap-data"
    port: int = 8077
    host: str = "127.0.0.1"
    parallelism: int = 2
    defaults: dict = field(
        default_factory=lambda: {
            "max_depth": 8,
            "min_nodes": 100,
            "min_clust": 0.7,
            "history": 5,
            "gamma": 0.8,
            "theta": 0.5,
        }
    )

    @staticmethod
    def load(path=None) -> "ServiceConfig":
        cfg = ServiceConfig()
        if path:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
            cfg.data_dir = doc.get("data_dir", cfg.data_dir)
            cfg.port = doc.get("port", cfg.port)
            cfg.host = doc.get("host", cfg.host)
            cfg.parallelism = doc.get("parallelism", cfg.parallelism)
            cfg.defaults.update(doc.get("defaults", {}))
        # env overrides: TECHGAP_PORT, TECHGAP_DATA_DIR, TECHGAP_PARALLELISM
        cfg.data_dir = os.environ.get(ENV_PREFIX + "DATA_DIR", cfg.data_dir)
        cfg.port = int(os.environ.get(ENV_PREFIX + "PORT", cfg.port))
        cfg.parallelism = int(
            os.environ.get(ENV_PREFIX + "PARALLELISM", cfg.parallelism)
        )
        return cfg


@dataclass
class JobTicket:
    job_id: str
    kind: str  # materialize | landscape | gap
    state: str = "queued"  # queued -> running -> done | failed
    progress: float = 0.0
    result: dict | None = None
    error: dict | None = None

    def as_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "kind": self.kind,
            "state": self.state,
            "progress": self.progress,
            "result": self.result,
            "error": self.error,
        }


class JobPool:
    def __init__(self, parallelism: int):
        self._executor = ThreadPoolExecutor(max_workers=parallelism)
        self._tickets: dict[str, JobTicket] = {}
        self._lock = threading.Lock()
        self._counter = itertools.count(1)

    def submit(self, kind: str, fn) -> JobTicket:
        with self._lock:
            ticket = JobTicket(job_id=f"job-{next(self._counter):05d}", kind=kind)
            self._tickets[ticket.job_id] = ticket

        def run():
            ticket.state = "running"
            ticket.progress = 0.1
            try:
                ticket.result = fn()
                ticket.progress = 1.0
                ticket.state = "done"
            except TechgapError as exc:
                ticket.error = exc.payload()
                ticket.state = "failed"
            except Exception as exc:  # noqa: BLE001 - job boundary
                ticket.error = {"code": "InternalError", "message": str(exc)}
                ticket.state = "failed"

        self._executor.submit(run)
        return ticket

    def get(self, job_id: str) -> JobTicket | None:
        return self._tickets.get(job_id)


class ExpandRequest(BaseModel):
    pos: list[str]
    neg: list[str] = []
    max_depth: int = 8


class LandscapeRequest(BaseModel):
    pos: list[str]
    neg: list[str] = []
    params: dict = {}


class GapRequest(BaseModel):
    landscape_id: str
    me: str
    theta: float
    cond: dict = {}
    ego_radius: int = 1
    gamma: float = 0.8
    min_clique_size: int = 3


class CompareRequest(BaseModel):
    org: str
    tech_a: str
    tech_b: str
    context: list[str] = []
    theta: float = 0.0
    params: dict = {}


def cjson(obj, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(obj) + "\n",
        status_code=status_code,
        media_type="application/json",
    )


def create_app(workspace: Workspace, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="techgap", version="0.1.0")
    jobs = JobPool(config.parallelism)
    app.state.workspace = workspace
    app.state.jobs = jobs
    app.state.config = config

    @app.exception_handler(TechgapError)
    async def handle_techgap_error(request: Request, exc: TechgapError):
        status = 404 if exc.code in NOT_FOUND_CODES else 400
        return cjson({"error": exc.payload()}, status_code=status)

    @app.get("/health")
    def health():
        snapshot_id = None
        if workspace._snapshot is not None:
            snapshot_id = workspace.snapshot.snapshot_id
        return cjson({"status": "ok", "snapshot_id": snapshot_id})

    @app.post("/expand")
    def expand(req: ExpandRequest):
        concepts = workspace.expand(req.pos, req.neg, req.max_depth)
        return cjson({"concepts": concepts})

    @app.post("/landscape")
    def landscape(req: LandscapeRequest):
        params = dict(config.defaults)
        params.update(req.params)
        params = {
            k: params[k]
            for k in ("max_depth", "min_nodes", "min_clust", "history")
            if k in params
        }

        def build():
            scape = workspace.run_landscape(req.pos, req.neg, params)
            return {"landscape_id": scape.landscape_id}

        ticket = jobs.submit("landscape", build)
        return cjson(ticket.as_dict(), status_code=202)

    @app.get("/jobs/{job_id}")
    def job(job_id: str):
        ticket = jobs.get(job_id)
        if ticket is None:
            return cjson(
                {"error": {"code": "UnknownJob", "message": job_id}}, status_code=404
            )
        return cjson(ticket.as_dict())

    @app.get("/landscape/{landscape_id}")
    def get_landscape(landscape_id: str):
        return cjson(workspace.landscape_bundle(landscape_id))

    @app.get("/landscape/{landscape_id}/cube")
    def cube(landscape_id: str, by: str = ""):
        from .landscape import kpi_cube

        dims = tuple(d for d in by.split(",") if d)
        scape = workspace.get_landscape(landscape_id)
        return cjson({"by": list(dims), "rows": kpi_cube(scape, dims)})

    @app.post("/gap")
    def gap(req: GapRequest):
        query = GapQuery(
            landscape_id=req.landscape_id,
            me=req.me,
            theta=req.theta,
            cond=ConditionSet.from_dict(req.cond),
            ego_radius=req.ego_radius,
            gamma=req.gamma,
            min_clique_size=req.min_clique_size,
        )
        return cjson(workspace.run_gap(query).as_dict())

    @app.post("/compare")
    def compare(req: CompareRequest):
        payload = chart_payload(
            "comparative_bars",
            None,
            workspace.snapshot,
            workspace.ontology,
            org=req.org,
            tech_a=req.tech_a,
            tech_b=req.tech_b,
            context_terms=req.context,
            params=req.params or None,
            theta=req.theta,
        )
        return cjson(payload)

    @app.get("/chart/{landscape_id}/{kind}")
    def chart(landscape_id: str, kind: str, org: str = "", tech_a: str = "", tech_b: str = "", context: str = ""):
        scape = workspace.get_landscape(landscape_id)
        kw = {}
        if kind == "comparative_bars":
            kw = {
                "org": org,
                "tech_a": tech_a,
                "tech_b": tech_b,
                "context_terms": [c for c in context.split(",") if c],
            }
        payload = chart_payload(kind, scape, workspace.snapshot, workspace.ontology, **kw)
        return cjson(payload)

    return app


def serve(config: ServiceConfig):  # pragma: no cover - thin uvicorn wrapper
    import uvicorn

    workspace = Workspace(config.data_dir)
    app = create_app(workspace, config)
    uvicorn.run(app, host=config.host, port=config.port)
