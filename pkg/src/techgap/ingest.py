"""Source parsing and relationship derivation.

Four source kinds arrive as JSONL: patents, news, funding, partnerships.
Parsing validates each line and collects rejections instead of aborting on
the first bad record. Relationship derivation turns validated batches into
timestamped data edges between canonical entity ids:

    org:<normalized name>      organizations
    tech:<normalized term>     technologies
    patent:<id> / doc:<id> / award:<id>

Entity resolution is exact string match after normalization; fuzzy matching
and NLP extraction are out of scope.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from itertools import combinations
from pathlib import Path

from .util import normalize_term

SOURCE_KINDS = ("patents", "news", "funding", "partnerships")

EDGE_KINDS = ("coOccurrence", "coOwnership", "ipTransfer", "worksOn", "partnership")
#: edge kinds whose direction is meaningless; stored with src < dst
UNDIRECTED_KINDS = frozenset({"coOccurrence", "coOwnership", "partnership"})


def org_id(name: str) -> str:
    return "org:" + normalize_term(name)


def tech_id(term: str) -> str:
    return "tech:" + normalize_term(term)


@dataclass(frozen=True)
class DataEdge:
    src: str
    dst: str
    edge_kind: str
    timestamp: date
    weight: float = 1.0

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"self-loop on {self.src}")
        if self.edge_kind not in EDGE_KINDS:
            raise ValueError(f"unknown edge kind {self.edge_kind!r}")
        if self.weight < 0:
            raise ValueError("edge weight must be nonnegative")

    def sort_key(self):
        return (self.edge_kind, self.src, self.dst, self.timestamp.isoformat(), self.weight)


@dataclass(frozen=True)
class PatentRecord:
    patent_id: str
    title: str
    grant_date: date
    assignees: tuple[str, ...]
    technology_terms: tuple[str, ...]
    abstract: str = ""
    transfers: tuple[tuple[str, date], ...] = ()  # (to_org, date)


@dataclass(frozen=True)
class NewsDocument:
    doc_id: str
    publish_date: date
    body: str
    mentions: tuple[tuple[str, str, int, int], ...] = ()  # (surface, kind, start, end)


@dataclass(frozen=True)
class FundingRecord:
    award_id: str
    recipient: str
    amount: float
    start_date: date
    technology_terms: tuple[str, ...] = ()


@dataclass(frozen=True)
class PartnershipRecord:
    org_a: str
    org_b: str
    relation: str
    since_date: date


@dataclass
class SourceBatch:
    kind: str
    records: list = field(default_factory=list)
    rejections: list[tuple[int, str]] = field(default_factory=list)


def _req(row: dict, name: str, line: int):
    if name not in row:
        raise ValueError(f"missing field {name!r}")
    return row[name]


def _date(value, line: int, name: str) -> date:
    try:
        return date.fromisoformat(value)
    except (TypeError, ValueError):
        raise ValueError(f"field {name!r}: bad date {value!r}")


def _parse_patent(row: dict, line: int) -> PatentRecord:
    assignees = tuple(_req(row, "assignees", line))
    if not assignees:
        raise ValueError("patent needs at least one assignee")
    transfers = tuple(
        (t["to"], _date(t["date"], line, "transfers.date"))
        for t in row.get("transfers", ())
    )
    return PatentRecord(
        patent_id=str(_req(row, "patent_id", line)),
        title=str(row.get("title", "")),
        grant_date=_date(_req(row, "grant_date", line), line, "grant_date"),
        assignees=assignees,
        technology_terms=tuple(row.get("technology_terms", ())),
        abstract=str(row.get("abstract", "")),
        transfers=transfers,
    )


def _parse_news(row: dict, line: int) -> NewsDocument:
    body = str(row.get("body", ""))
    mentions = []
    for m in row.get("mentions", ()):
        start, end = int(m["start"]), int(m["end"])
        if not (0 <= start < end <= len(body)):
            raise ValueError(f"mention offsets [{start},{end}) outside body")
        mentions.append((str(m["surface"]), str(m["kind"]), start, end))
    return NewsDocument(
        doc_id=str(_req(row, "doc_id", line)),
        publish_date=_date(_req(row, "publish_date", line), line, "publish_date"),
        body=body,
        mentions=tuple(mentions),
    )


def _parse_funding(row: dict, line: int) -> FundingRecord:
    amount = float(_req(row, "amount", line))
    if amount < 0:
        raise ValueError("amount must be nonnegative")
    return FundingRecord(
        award_id=str(_req(row, "award_id", line)),
        recipient=str(_req(row, "recipient", line)),
        amount=amount,
        start_date=_date(_req(row, "start_date", line), line, "start_date"),
        technology_terms=tuple(row.get("technology_terms", ())),
    )


def _parse_partnership(row: dict, line: int) -> PartnershipRecord:
    a, b = str(_req(row, "org_a", line)), str(_req(row, "org_b", line))
    if normalize_term(a) == normalize_term(b):
        raise ValueError("partnership endpoints must differ")
    return PartnershipRecord(
        org_a=a,
        org_b=b,
        relation=str(row.get("relation", "partner")),
        since_date=_date(_req(row, "since_date", line), line, "since_date"),
    )


_PARSERS = {
    "patents": _parse_patent,
    "news": _parse_news,
    "funding": _parse_funding,
    "partnerships": _parse_partnership,
}


def load_source(kind: str, path) -> SourceBatch:
    """Parse one JSONL file; bad lines become rejections with line numbers."""
    if kind not in SOURCE_KINDS:
        raise ValueError(f"unknown source kind {kind!r}")
    batch = SourceBatch(kind=kind)
    parser = _PARSERS[kind]
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                row = json.loads(raw)
            except json.JSONDecodeError as exc:
                batch.rejections.append((lineno, f"parse error: {exc.msg}"))
                continue
            try:
                batch.records.append(parser(row, lineno))
            except (ValueError, KeyError, TypeError) as exc:
                batch.rejections.append((lineno, str(exc)))
    return batch


def _edge(src: str, dst: str, kind: str, ts: date, weight: float = 1.0) -> DataEdge:
    if kind in UNDIRECTED_KINDS and dst < src:
        src, dst = dst, src
    return DataEdge(src=src, dst=dst, edge_kind=kind, timestamp=ts, weight=weight)


def derive_relationships(batch: SourceBatch, min_cooccurrence: int = 1) -> list[DataEdge]:
    """Derive data-graph edges from one validated batch.

    A patent with ``a`` assignees and ``t`` terms yields C(a,2) coOwnership,
    a*t worksOn, and C(t,2) coOccurrence edges, all stamped with the record
    date. Co-occurrence pairs seen fewer than ``min_cooccurrence`` times
    across the batch are dropped.
    """
    edges: list[DataEdge] = []
    cooc_counts: dict[tuple[str, str], int] = {}
    cooc_edges: list[DataEdge] = []

    def cooccur(terms, ts):
        for ta, tb in combinations(sorted(terms), 2):
            cooc_counts[(ta, tb)] = cooc_counts.get((ta, tb), 0) + 1
            cooc_edges.append(_edge(ta, tb, "coOccurrence", ts))

    for rec in batch.records:
        if isinstance(rec, PatentRecord):
            orgs = sorted({org_id(a) for a in rec.assignees})
            techs = sorted({tech_id(t) for t in rec.technology_terms})
            for oa, ob in combinations(orgs, 2):
                edges.append(_edge(oa, ob, "coOwnership", rec.grant_date))
            for o in orgs:
                for t in techs:
                    edges.append(_edge(o, t, "worksOn", rec.grant_date))
            cooccur(techs, rec.grant_date)
            for to_org, ts in rec.transfers:
                target = org_id(to_org)
                if target != orgs[0]:
                    edges.append(_edge(orgs[0], target, "ipTransfer", ts))
        elif isinstance(rec, NewsDocument):
            orgs = sorted(
                {org_id(s) for s, kind, _, _ in rec.mentions if kind == "organization"}
            )
            techs = sorted(
                {tech_id(s) for s, kind, _, _ in rec.mentions if kind == "technology"}
            )
            for o in orgs:
                for t in techs:
                    edges.append(_edge(o, t, "worksOn", rec.publish_date))
            cooccur(techs, rec.publish_date)
        elif isinstance(rec, FundingRecord):
            o = org_id(rec.recipient)
            for t in sorted({tech_id(t) for t in rec.technology_terms}):
                edges.append(_edge(o, t, "worksOn", rec.start_date))
        elif isinstance(rec, PartnershipRecord):
            edges.append(
                _edge(org_id(rec.org_a), org_id(rec.org_b), "partnership", rec.since_date)
            )
        else:  # pragma: no cover - parser guarantees record types
            raise TypeError(f"unexpected record {type(rec).__name__}")

    for e in cooc_edges:
        if cooc_counts[(e.src, e.dst)] >= min_cooccurrence:
            edges.append(e)
    edges.sort(key=DataEdge.sort_key)
    return edges
