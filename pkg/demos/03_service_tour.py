"""Walkthrough: the full HTTP API surface against an in-process client.

Exercises expansion, the asynchronous landscape job flow, the KPI cube,
gap mining, and the chart payload endpoints the dashboard renders.

Run: python demos/03_service_tour.py
"""

import json
import tempfile
import time
from pathlib import Path

from fastapi.testclient import TestClient

from techgap import GapPlant, RoiPlant, SyntheticScenario, Workspace, generate_scenario
from techgap.service import ServiceConfig, create_app


def main():
    with tempfile.TemporaryDirectory() as tmp:
        corpus = Path(tmp) / "corpus"
        generate_scenario(
            SyntheticScenario(roi=RoiPlant(), gap=GapPlant()), corpus
        )
        ledger = json.loads((corpus / "ledger.json").read_text(encoding="utf-8"))
        ws = Workspace(Path(tmp) / "data")
        ws.materialize_from_config(corpus / "view.toml")

        client = TestClient(create_app(ws, ServiceConfig()))

        print("GET /health ->", client.get("/health").json())

        concepts = client.post(
            "/expand", json={"pos": ["sensor fusion"]}
        ).json()["concepts"]
        print(f"POST /expand -> {len(concepts)} concepts")

        ticket = client.post(
            "/landscape",
            json={"pos": ["sensor fusion"], "params": ledger["gap"]["params"]},
        ).json()
        print("POST /landscape ->", ticket["job_id"], ticket["state"])
        while ticket["state"] not in ("done", "failed"):
            time.sleep(0.05)
            ticket = client.get(f"/jobs/{ticket['job_id']}").json()
        lid = ticket["result"]["landscape_id"]
        print("job finished ->", lid)

        cube = client.get(f"/landscape/{lid}/cube?by=org").json()["rows"]
        print("GET /landscape/{id}/cube?by=org ->")
        for row in cube:
            print(f"  {row['org']}: {row['patent_count']:.0f} patents, "
                  f"{row['award_total']:.0f} award volume")

        report = client.post(
            "/gap",
            json={"landscape_id": lid, "me": ledger["gap"]["me"],
                  "theta": ledger["gap"]["theta"]},
        ).json()
        print("POST /gap ->", [r["org"] for r in report["results"]])

        spider = client.get(f"/chart/{lid}/spider").json()
        print(f"GET /chart/{{id}}/spider -> {len(spider['axes'])} axes, "
              f"{len(spider['series'])} series")
        timeline = client.get(f"/chart/{lid}/timeline").json()
        events = sum(len(r["events"]) for r in timeline["rows"])
        print(f"GET /chart/{{id}}/timeline -> {events} events "
              f"across {len(timeline['rows'])} technologies")


if __name__ == "__main__":
    main()
