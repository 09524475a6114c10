"""Deterministic synthetic corpora with planted structure.

Two kinds of plants are supported, separately or together:

* densifying regions: a branch of technology concepts whose co-occurrence
  graph grows denser every year for a scheduled span (or, with growth
  disabled, lands entirely in the first year as a control);
* gap scenarios: technology combinations (cliques) worked on by a reference
  organization, its declared partners, strong competitors, and weak
  bystanders, with KPI volumes arranged so the competitors sit beyond the
  planted distance threshold and everyone else does not.

Everything is a pure function of the seed. Alongside the four JSONL sources
and the ontology, the generator writes ``ledger.json``: its own bookkeeping
of planted nodes, roles, and per-(org, year, concept) KPI contributions,
which the tests use as an independent oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import date
from itertools import combinations
from pathlib import Path

from .errors import InfeasibleSpec
from .util import canonical_json, normalize_term
from .ingest import org_id


@dataclass
class RoiPlant:
    name: str = "accelerated computing"
    n_nodes: int = 120
    edge_density: float = 0.78
    growth_years: int = 5
    n_orgs: int = 6
    growth: bool = True


@dataclass
class GapPlant:
    context: str = "sensor fusion"
    n_cliques: int = 4
    clique_size: int = 4
    growth_years: int = 3
    me: str = "Reference Labs"
    partners: tuple[str, ...] = ("Partner Alpha", "Partner Beta")
    competitors: tuple[str, ...] = ("Competitor Prime", "Competitor Zenith")
    weak_orgs: tuple[str, ...] = ("Modest Works", "Minor Industries")
    base_patents_per_pair: int = 1
    competitor_multiplier: int = 4
    theta: float = 0.5


@dataclass
class SyntheticScenario:
    seed: int = 7
    start_year: int = 2019
    n_years: int = 5
    background_techs: int = 12
    background_orgs: int = 4
    roi: RoiPlant | None = None
    gap: GapPlant | None = None

    @staticmethod
    def from_dict(d: dict) -> "SyntheticScenario":
        spec = SyntheticScenario(
            seed=d.get("seed", 7),
            start_year=d.get("start_year", 2019),
            n_years=d.get("n_years", 5),
            background_techs=d.get("background_techs", 12),
            background_orgs=d.get("background_orgs", 4),
        )
        if "roi" in d:
            spec.roi = RoiPlant(**d["roi"])
        if "gap" in d:
            g = dict(d["gap"])
            for key in ("partners", "competitors", "weak_orgs"):
                if key in g:
                    g[key] = tuple(g[key])
            spec.gap = GapPlant(**g)
        return spec


def _slug(text: str) -> str:
    return normalize_term(text).replace(" ", "-")


def _day(rng: random.Random, year: int) -> date:
    return date(year, rng.randrange(1, 13), rng.randrange(1, 29))


class _Ledger:
    """Generator-side KPI bookkeeping, mirrored on the landscape's
    attribution rules (integer count per (org, year, concept))."""

    def __init__(self):
        self.kpi: dict[str, dict[str, dict[str, dict[str, float]]]] = {}

    def bump(self, org: str, year: int, concept: str, metric: str, amount: float = 1.0):
        cell = (
            self.kpi.setdefault(org, {})
            .setdefault(str(year), {})
            .setdefault(concept, {})
        )
        cell[metric] = cell.get(metric, 0.0) + amount


def generate_scenario(spec: SyntheticScenario, out_dir) -> dict:
    """Write ontology + four JSONL sources + ledger.json + view.toml.

    Returns the ledger dict. Raises InfeasibleSpec when the plant cannot
    satisfy its own detection thresholds by construction.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.seed)
    ledger = _Ledger()

    nodes = [{"id": "technology", "label": "technology", "synonyms": [], "kind": "class"}]
    edges = []
    patents, news, funding, partnerships = [], [], [], []
    roi_ledger = None
    gap_ledger = None
    serial = 0

    def next_id(prefix: str) -> str:
        nonlocal serial
        serial += 1
        return f"{prefix}-{serial:05d}"

    def add_branch(label: str, synonyms=()):
        cid = _slug(label)
        nodes.append({"id": cid, "label": label, "synonyms": list(synonyms), "kind": "class"})
        edges.append({"parent": "technology", "child": cid, "relation": "subclassOf"})
        return cid

    def add_tech(branch_id: str, label: str):
        cid = _slug(label)
        nodes.append({"id": cid, "label": label, "synonyms": [], "kind": "class"})
        edges.append({"parent": branch_id, "child": cid, "relation": "subclassOf"})
        return cid

    def add_patent(org: str, terms: list[str], concepts: list[str], when: date):
        patents.append(
            {
                "patent_id": next_id("pat"),
                "title": f"Method combining {terms[0]} with {terms[1]}",
                "grant_date": when.isoformat(),
                "assignees": [org],
                "technology_terms": terms,
                "abstract": f"Techniques relating {terms[0]} and {terms[1]}.",
            }
        )
        for c in concepts:
            ledger.bump(org_id(org), when.year, c, "patent_count")

    # --- background (sparse, triangle-free, spans every year) -------------
    bg_branch = add_branch("general engineering")
    bg_labels = [f"general engineering topic {i:02d}" for i in range(spec.background_techs)]
    for lbl in bg_labels:
        add_tech(bg_branch, lbl)
    bg_orgs = [f"Background Org {i}" for i in range(spec.background_orgs)]
    for k in range(spec.n_years * 2):
        year = spec.start_year + k % spec.n_years
        i = k % max(1, len(bg_labels) - 1)
        org = bg_orgs[k % len(bg_orgs)]
        add_patent(
            org,
            [bg_labels[i], bg_labels[i + 1]],
            [_slug(bg_labels[i]), _slug(bg_labels[i + 1])],
            _day(rng, year),
        )

    # --- planted densifying region ----------------------------------------
    if spec.roi is not None:
        roi = spec.roi
        if roi.n_nodes < 3 or not (0 < roi.edge_density <= 1):
            raise InfeasibleSpec("roi needs >=3 nodes and density in (0,1]")
        if roi.growth_years > spec.n_years:
            raise InfeasibleSpec("roi growth schedule longer than covered years")
        branch = add_branch(roi.name, synonyms=[roi.name.upper()])
        labels = [f"{roi.name} unit {i:03d}" for i in range(roi.n_nodes)]
        concepts = [add_tech(branch, lbl) for lbl in labels]
        pairs = [
            (i, j)
            for i, j in combinations(range(roi.n_nodes), 2)
            if rng.random() < roi.edge_density
        ]
        if len(pairs) < roi.growth_years:
            raise InfeasibleSpec("too few region edges for the growth schedule")
        rng.shuffle(pairs)
        orgs = [f"{roi.name.title()} Org {i}" for i in range(roi.n_orgs)]
        chunk = max(1, len(pairs) // roi.growth_years)
        anchor = spec.start_year + spec.n_years - roi.growth_years
        for k, (i, j) in enumerate(pairs):
            bucket = min(k // chunk, roi.growth_years - 1)
            # growth disabled: everything lands in the first covered year,
            # so the trailing density window is flat (control scenario)
            year = spec.start_year if not roi.growth else anchor + bucket
            org = orgs[k % len(orgs)]
            add_patent(
                org,
                [labels[i], labels[j]],
                [concepts[i], concepts[j]],
                _day(rng, year),
            )
        roi_ledger = {
            "branch": branch,
            "branch_label": roi.name,
            "concepts": concepts,
            "entities": sorted("tech:" + normalize_term(lbl) for lbl in labels),
            "orgs": sorted(org_id(o) for o in orgs),
            "growth": roi.growth,
            "growth_years": roi.growth_years,
        }

    # --- planted gap scenario ----------------------------------------------
    if spec.gap is not None:
        gap = spec.gap
        if gap.clique_size < 3:
            raise InfeasibleSpec("gap cliques need >=3 technologies")
        if gap.growth_years > spec.n_years:
            raise InfeasibleSpec("gap growth schedule longer than covered years")
        branch = add_branch(gap.context)
        cliques: list[list[tuple[str, str]]] = []  # (label, concept)
        for c in range(gap.n_cliques):
            members = []
            for i in range(gap.clique_size):
                lbl = f"{gap.context} unit {c}{i:02d}"
                members.append((lbl, add_tech(branch, lbl)))
            cliques.append(members)

        # which orgs file patents on which clique, and how many per pair-year
        base, mult = gap.base_patents_per_pair, gap.competitor_multiplier
        assignments: list[tuple[str, int, int]] = [(gap.me, 0, base)]
        for i, p in enumerate(gap.partners):
            assignments.append((p, 1 % gap.n_cliques, base))
        for i, c in enumerate(gap.competitors):
            assignments.append((c, (i * 2) % gap.n_cliques, mult))
            assignments.append((c, (i * 2 + 1) % gap.n_cliques, mult))
        for i, w in enumerate(gap.weak_orgs):
            assignments.append((w, i % gap.n_cliques, base))
            assignments.append((w, (i + 2) % gap.n_cliques, base))

        gap_anchor = spec.start_year + spec.n_years - gap.growth_years
        for org, clique_idx, per_pair in assignments:
            members = cliques[clique_idx]
            pair_list = list(combinations(range(len(members)), 2))
            for k, (i, j) in enumerate(pair_list):
                year = gap_anchor + (k * gap.growth_years) // len(pair_list)
                for _ in range(per_pair):
                    add_patent(
                        org,
                        [members[i][0], members[j][0]],
                        [members[i][1], members[j][1]],
                        _day(rng, year),
                    )

        for p in gap.partners:
            partnerships.append(
                {
                    "org_a": gap.me,
                    "org_b": p,
                    "relation": "strategic partner",
                    "since_date": date(spec.start_year, 1, 15).isoformat(),
                }
            )

        # awards: strong for competitors, token for the reference org
        award_year = spec.start_year + spec.n_years - 1
        awards = [(gap.me, 200_000.0, cliques[0])]
        for i, comp in enumerate(gap.competitors):
            awards.append((comp, 2_000_000.0 - i * 400_000.0, cliques[(i * 2) % gap.n_cliques]))
        for org, amount, members in awards:
            funding.append(
                {
                    "award_id": next_id("awd"),
                    "recipient": org,
                    "amount": amount,
                    "start_date": date(award_year, 3, 1).isoformat(),
                    "technology_terms": [lbl for lbl, _ in members],
                }
            )
            for _, concept in members:
                ledger.bump(org_id(org), award_year, concept, "award_total", amount)

        # news coverage: competitors only
        for i, comp in enumerate(gap.competitors):
            members = cliques[(i * 2) % gap.n_cliques]
            for d in range(3 - i):
                lbl = members[d % len(members)][0]
                concept = members[d % len(members)][1]
                body = f"{comp} announced a breakthrough in {lbl} this quarter."
                year = spec.start_year + spec.n_years - 1
                news.append(
                    {
                        "doc_id": next_id("doc"),
                        "publish_date": date(year, 4 + d, 2).isoformat(),
                        "body": body,
                        "mentions": [
                            {
                                "surface": comp,
                                "kind": "organization",
                                "start": body.find(comp),
                                "end": body.find(comp) + len(comp),
                            },
                            {
                                "surface": lbl,
                                "kind": "technology",
                                "start": body.find(lbl),
                                "end": body.find(lbl) + len(lbl),
                            },
                        ],
                    }
                )
                ledger.bump(org_id(comp), year, concept, "publication_count")
                ledger.bump(org_id(comp), year, concept, "news_mentions")

        gap_ledger = {
            "branch": branch,
            "context_label": gap.context,
            "concepts": [c for members in cliques for _, c in members],
            "cliques": [[c for _, c in members] for members in cliques],
            "me": org_id(gap.me),
            "partners": sorted(org_id(p) for p in gap.partners),
            "competitors": sorted(org_id(c) for c in gap.competitors),
            "weak": sorted(org_id(w) for w in gap.weak_orgs),
            "theta": gap.theta,
            "params": {"min_nodes": 6, "min_clust": 0.6, "history": gap.growth_years},
        }

    # --- write files ----------------------------------------------------------
    ontology = {"format": 1, "nodes": nodes, "edges": edges}
    (out / "ontology.json").write_text(canonical_json(ontology) + "\n", encoding="utf-8")

    def write_jsonl(name: str, rows):
        (out / name).write_text(
            "".join(canonical_json(r) + "\n" for r in rows), encoding="utf-8"
        )

    write_jsonl("patents.jsonl", patents)
    write_jsonl("news.jsonl", news)
    write_jsonl("funding.jsonl", funding)
    write_jsonl("partnerships.jsonl", partnerships)

    ledger_doc = {
        "seed": spec.seed,
        "start_year": spec.start_year,
        "n_years": spec.n_years,
        "roi": roi_ledger,
        "gap": gap_ledger,
        "kpi": ledger.kpi,
    }
    (out / "ledger.json").write_text(canonical_json(ledger_doc) + "\n", encoding="utf-8")

    view = [
        'ontology = "ontology.json"',
        "",
        "[[sources]]",
        'kind = "patents"',
        'path = "patents.jsonl"',
        "",
        "[[sources]]",
        'kind = "news"',
        'path = "news.jsonl"',
        "",
        "[[sources]]",
        'kind = "funding"',
        'path = "funding.jsonl"',
        "",
        "[[sources]]",
        'kind = "partnerships"',
        'path = "partnerships.jsonl"',
        "",
    ]
    (out / "view.toml").write_text("\n".join(view), encoding="utf-8")
    return ledger_doc
