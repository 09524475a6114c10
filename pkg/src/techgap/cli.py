"""Command-line interface mirroring the HTTP API one-to-one.

With --json every pipeline result is printed as the same canonical JSON the
service returns, so results are byte-identical across both surfaces.
"""

from __future__ import annotations

import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import click

from .charts import chart_payload
from .errors import TechgapError
from .gap import ConditionSet, GapQuery
from .generator import SyntheticScenario, generate_scenario
from .ingest import load_source
from .landscape import kpi_cube
from .service import ServiceConfig
from .util import canonical_json
from .workspace import Workspace


def _workspace(ctx) -> Workspace:
    return Workspace(ctx.obj["data_dir"])


def _emit(obj, as_json: bool, human: str | None = None):
    if as_json:
        click.echo(canonical_json(obj))
    else:
        click.echo(human if human is not None else canonical_json(obj))


@click.group(invoke_without_command=True)
@click.option("--data-dir", default="techgap-data", envvar="TECHGAP_DATA_DIR",
              help="Workspace directory for snapshots and landscapes.")
@click.pass_context
def main(ctx, data_dir):
    """Technology-gap discovery over an ontology-backed knowledge graph."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())
        ctx.exit(2)


def _run(fn):
    try:
        fn()
    except TechgapError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), default=None,
              help="Scenario TOML; defaults omit it for the built-in scenario.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
def generate(spec_path, out_dir, seed):
    """Generate a synthetic corpus with planted structure."""
    def go():
        if spec_path:
            with open(spec_path, "rb") as fh:
                spec = SyntheticScenario.from_dict(tomllib.load(fh))
        else:
            spec = SyntheticScenario()
        if seed is not None:
            spec.seed = seed
        generate_scenario(spec, out_dir)
        click.echo(f"wrote scenario to {out_dir}")
    _run(go)


@main.command()
@click.option("--kind", required=True,
              type=click.Choice(["patents", "news", "funding", "partnerships"]))
@click.option("--path", "src_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def ingest(kind, src_path, as_json):
    """Validate one JSONL source file and report rejections."""
    def go():
        batch = load_source(kind, src_path)
        summary = {
            "kind": kind,
            "accepted": len(batch.records),
            "rejections": [{"line": ln, "message": msg} for ln, msg in batch.rejections],
        }
        _emit(summary, as_json,
              f"{kind}: {len(batch.records)} accepted, {len(batch.rejections)} rejected")
    _run(go)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def materialize(ctx, config_path, as_json):
    """Materialize the view described by a view.toml config."""
    def go():
        ws = _workspace(ctx)
        snapshot = ws.materialize_from_config(config_path)
        _emit({"snapshot_id": snapshot.snapshot_id,
               "entities": len(snapshot.entities),
               "edges": len(snapshot.edges)},
              as_json, f"materialized {snapshot.snapshot_id}")
    _run(go)


@main.command()
@click.option("--pos", required=True, help="Comma-separated positive terms.")
@click.option("--neg", default="", help="Comma-separated negative terms.")
@click.option("--max-depth", default=8, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def expand(ctx, pos, neg, max_depth, as_json):
    """Expand query terms over the ontology."""
    def go():
        ws = _workspace(ctx)
        concepts = ws.expand(_split(pos), _split(neg), max_depth)
        _emit({"concepts": concepts}, as_json, "\n".join(concepts))
    _run(go)


def _split(csv: str) -> list[str]:
    return [t.strip() for t in csv.split(",") if t.strip()]


@main.command("detect-roi")
@click.option("--concepts", "concepts_path", type=click.Path(exists=True), required=True,
              help="File with one concept id per line (seed concepts).")
@click.option("--min-nodes", default=100, type=int)
@click.option("--min-clust", default=0.7, type=float)
@click.option("--history", default=5, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def detect_roi(ctx, concepts_path, min_nodes, min_clust, history, as_json):
    """Detect densifying regions seeded from a concept list."""
    from .analytics import detect_densifying_regions

    def go():
        ws = _workspace(ctx)
        concepts = [
            line.strip()
            for line in Path(concepts_path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        seeds = ws.snapshot.concepts_to_instances(concepts)
        rois = detect_densifying_regions(
            seeds, ws.snapshot, min_nodes=min_nodes, min_clust=min_clust,
            history=history, index=ws.temporal_index, seed_concepts=concepts,
        )
        _emit({"rois": [r.as_dict() for r in rois]}, as_json,
              f"{len(rois)} region(s): " + ", ".join(r.roi_id for r in rois))
    _run(go)


@main.command()
@click.option("--pos", required=True)
@click.option("--neg", default="")
@click.option("--max-depth", default=None, type=int)
@click.option("--min-nodes", default=None, type=int)
@click.option("--min-clust", default=None, type=float)
@click.option("--history", default=None, type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def landscape(ctx, pos, neg, max_depth, min_nodes, min_clust, history, as_json):
    """Build a technology landscape and persist its bundle."""
    def go():
        ws = _workspace(ctx)
        params = {
            k: v
            for k, v in {
                "max_depth": max_depth,
                "min_nodes": min_nodes,
                "min_clust": min_clust,
                "history": history,
            }.items()
            if v is not None
        }
        scape = ws.run_landscape(_split(pos), _split(neg), params)
        bundle = ws.landscape_bundle(scape.landscape_id)
        _emit(bundle, as_json,
              f"landscape {scape.landscape_id}: {len(scape.rows)} P rows, "
              f"{len(scape.rois)} ROI(s)")
    _run(go)


@main.command()
@click.option("--landscape", "landscape_id", required=True)
@click.option("--me", required=True)
@click.option("--theta", required=True, type=float)
@click.option("--cond", "cond_path", type=click.Path(exists=True), default=None)
@click.option("--ego-radius", default=1, type=int)
@click.option("--gamma", default=0.8, type=float)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def gap(ctx, landscape_id, me, theta, cond_path, ego_radius, gamma, as_json):
    """Run gap analysis against a persisted landscape."""
    def go():
        ws = _workspace(ctx)
        cond = ConditionSet()
        if cond_path:
            with open(cond_path, "rb") as fh:
                cond = ConditionSet.from_dict(tomllib.load(fh))
        result = ws.run_gap(GapQuery(
            landscape_id=landscape_id, me=me, theta=theta, cond=cond,
            ego_radius=ego_radius, gamma=gamma,
        ))
        _emit(result.as_dict(), as_json,
              "\n".join(f"{e.org} distance={e.distance:.3f}" for e in result.entries)
              or "no competitors above theta")
    _run(go)


@main.command()
@click.option("--org", required=True)
@click.option("--tech-a", required=True)
@click.option("--tech-b", required=True)
@click.option("--context", default="")
@click.option("--theta", default=0.0, type=float)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def compare(ctx, org, tech_a, tech_b, context, theta, as_json):
    """Comparative gap analysis for two technologies."""
    def go():
        ws = _workspace(ctx)
        payload = chart_payload(
            "comparative_bars", None, ws.snapshot, ws.ontology,
            org=org, tech_a=tech_a, tech_b=tech_b,
            context_terms=_split(context), theta=theta,
        )
        _emit(payload, as_json,
              "\n".join(f"{p['tech']}: leader {p['leaders'][0]['org'] if p['leaders'] else '-'}"
                        for p in payload["panels"]))
    _run(go)


@main.command()
@click.option("--landscape", "landscape_id", required=True)
@click.option("--by", default="", help="Comma-separated cube dimensions.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def cube(ctx, landscape_id, by, as_json):
    """KPI data-cube roll-up over a landscape's performance relation."""
    def go():
        ws = _workspace(ctx)
        scape = ws.get_landscape(landscape_id)
        rows = kpi_cube(scape, tuple(_split(by)))
        _emit({"by": _split(by), "rows": rows}, as_json)
    _run(go)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.pass_context
def serve(ctx, config_path):
    """Run the HTTP JSON API."""
    from .service import serve as run_service

    cfg = ServiceConfig.load(config_path)
    if ctx.obj.get("data_dir"):
        cfg.data_dir = ctx.obj["data_dir"]
    run_service(cfg)


if __name__ == "__main__":
    main()
