"""Small shared helpers: term normalization, canonical JSON, hashing."""

import hashlib
import json
import re

_WS = re.compile(r"\s+")


def normalize_term(term: str) -> str:
    """Unicode case-fold and collapse internal whitespace."""
    return _WS.sub(" ", term.strip()).casefold()


def canonical_json(obj) -> str:
    """Deterministic JSON encoding: sorted keys, no whitespace, UTF-8 text."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_jsonl(rows) -> str:
    return "".join(canonical_json(r) + "\n" for r in rows)


def content_id(prefix: str, obj) -> str:
    digest = hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
    return f"{prefix}-{digest[:12]}"
