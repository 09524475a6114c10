"""Walkthrough: mine competitive gaps around a reference organization.

Builds a corpus where "Reference Labs" and its declared partners work a few
technology cliques at a modest rate while two competitors dominate adjacent
cliques with patents, awards, and press. Gap analysis drops the partner ego
network and surfaces exactly the competitors beyond the distance threshold.

Run: python demos/02_gap_analysis.py
"""

import json
import tempfile
from pathlib import Path

from techgap import (
    ConditionSet,
    GapPlant,
    GapQuery,
    SyntheticScenario,
    Workspace,
    generate_scenario,
)


def main():
    with tempfile.TemporaryDirectory() as tmp:
        corpus = Path(tmp) / "corpus"
        generate_scenario(SyntheticScenario(gap=GapPlant()), corpus)
        ledger = json.loads((corpus / "ledger.json").read_text(encoding="utf-8"))

        ws = Workspace(Path(tmp) / "data")
        ws.materialize_from_config(corpus / "view.toml")

        params = ledger["gap"]["params"]
        scape = ws.run_landscape(["sensor fusion"], params=params)
        print(f"landscape {scape.landscape_id}: {len(scape.rows)} performance rows, "
              f"{len(scape.org_nodes)} active organizations")

        result = ws.run_gap(GapQuery(
            landscape_id=scape.landscape_id,
            me="Reference Labs",
            theta=ledger["gap"]["theta"],
        ))
        print(f"\ncompetitors beyond theta={ledger['gap']['theta']}:")
        for entry in result.entries:
            print(f"  {entry.org_name}: distance {entry.distance:.2f}, "
                  f"kpis {entry.kpis}")
        print("\nexcluded (with reasons):")
        for exc in result.excluded:
            print(f"  {exc['org']}: {exc['reason']}")

        # tighten the screen with an org rule: serious patent volume only
        cond = ConditionSet.from_dict(
            {"org_rules": [{"field": "patent_count", "comparator": ">=", "value": 40}]}
        )
        strict = ws.run_gap(GapQuery(
            landscape_id=scape.landscape_id, me="Reference Labs",
            theta=ledger["gap"]["theta"], cond=cond,
        ))
        print(f"\nwith patent_count >= 40: {strict.org_ids}")


if __name__ == "__main__":
    main()
