"""Gap-analysis tests: predicate semantics, distance metric properties,
the planted competitor scenario, and filter-chain trace soundness."""

import math

import pytest

from techgap import ConditionSet, GapQuery, kpi_distance, run_gap
from techgap.errors import DimensionMismatch, UnknownOrganization
from techgap.gap import Predicate, metric_maxima


def make_query(landscape_id, me, theta, **kw):
    return GapQuery(landscape_id=landscape_id, me=me, theta=theta, **kw)


# --- predicates -----------------------------------------------------------


def test_predicate_comparators():
    assert Predicate("x", ">=", 3).evaluate({"x": 3})[0]
    assert not Predicate("x", "<", 3).evaluate({"x": 3})[0]
    assert Predicate("name", "contains", "lab").evaluate({"name": "big labs"})[0]
    assert Predicate("x", "=", "a").evaluate({"x": "a"})[0]


def test_predicate_fails_closed():
    ok, note = Predicate("missing", ">", 1).evaluate({"x": 2})
    assert not ok and "missing" in note
    ok, note = Predicate("x", ">", 1).evaluate({"x": "a string"})
    assert not ok and "type mismatch" in note


def test_predicate_rejects_unknown_comparator():
    with pytest.raises(ValueError):
        Predicate("x", "~=", 1)


def test_condition_set_roundtrip():
    cond = ConditionSet.from_dict(
        {
            "org_rules": [{"field": "patent_count", "comparator": ">=", "value": 2}],
            "clique_rules": [{"field": "org_count", "comparator": ">", "value": 1}],
        }
    )
    assert ConditionSet.from_dict(cond.as_dict()) == cond


def test_gap_query_rejects_negative_theta():
    with pytest.raises(ValueError):
        GapQuery(landscape_id="x", me="y", theta=-1.0)


# --- distance metric ------------------------------------------------------


def test_kpi_distance_unit_axes():
    a, b = (1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0)
    maxima = (1.0, 1.0, 1.0, 1.0)
    assert kpi_distance(a, b, maxima) == pytest.approx(math.sqrt(2))


def test_kpi_distance_scale_invariant():
    a, b = (3.0, 10.0, 0.0, 2.0), (1.0, 4.0, 0.0, 8.0)
    maxima = (3.0, 10.0, 0.0, 8.0)
    d = kpi_distance(a, b, maxima)
    s = 17.0
    scaled = kpi_distance(
        tuple(x * s for x in a),
        tuple(x * s for x in b),
        tuple(m * s for m in maxima),
    )
    assert scaled == pytest.approx(d)


def test_kpi_distance_zero_max_metric_ignored():
    assert kpi_distance((0.0, 5.0), (0.0, 5.0), (0.0, 5.0)) == 0.0


def test_kpi_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        kpi_distance((1.0,), (1.0, 2.0), (1.0, 2.0))


def test_metric_maxima():
    assert metric_maxima({}) == (0.0, 0.0, 0.0, 0.0)
    vectors = {"a": (1.0, 9.0, 0.0, 2.0), "b": (4.0, 3.0, 0.0, 5.0)}
    assert metric_maxima(vectors) == (4.0, 9.0, 0.0, 5.0)


# --- planted scenario ----------------------------------------------------


def run_planted_gap(planted, gap_landscape, theta, **kw):
    ledger_gap = planted["ledger"]["gap"]
    query = make_query(gap_landscape.landscape_id, ledger_gap["me"], theta, **kw)
    return run_gap(gap_landscape, planted["workspace"].snapshot, query)


def test_planted_competitors_found(planted, gap_landscape):
    ledger_gap = planted["ledger"]["gap"]
    result = run_planted_gap(planted, gap_landscape, ledger_gap["theta"])
    assert set(result.org_ids) == set(ledger_gap["competitors"])


def test_partners_excluded_by_ego(planted, gap_landscape):
    ledger_gap = planted["ledger"]["gap"]
    result = run_planted_gap(planted, gap_landscape, 0.0)
    returned = set(result.org_ids)
    assert ledger_gap["me"] not in returned
    assert not (set(ledger_gap["partners"]) & returned)


def test_results_sorted_by_distance(planted, gap_landscape):
    result = run_planted_gap(planted, gap_landscape, 0.0)
    distances = [e.distance for e in result.entries]
    assert distances == sorted(distances, reverse=True)


def test_theta_monotonicity(planted, gap_landscape):
    prev = None
    for theta in (0.0, 0.2, 0.5, 1.0, float("inf")):
        got = set(run_planted_gap(planted, gap_landscape, theta).org_ids)
        if prev is not None:
            assert got <= prev
        prev = got
    assert prev == set()


def test_org_rules_only_shrink(planted, gap_landscape):
    base = set(run_planted_gap(planted, gap_landscape, 0.0).org_ids)
    cond = ConditionSet.from_dict(
        {"org_rules": [{"field": "patent_count", "comparator": ">=", "value": 40}]}
    )
    filtered = set(run_planted_gap(planted, gap_landscape, 0.0, cond=cond).org_ids)
    assert filtered <= base


def test_org_rule_on_missing_field_excludes_everyone(planted, gap_landscape):
    cond = ConditionSet.from_dict(
        {"org_rules": [{"field": "no_such_property", "comparator": ">", "value": 0}]}
    )
    result = run_planted_gap(planted, gap_landscape, 0.0, cond=cond)
    assert result.org_ids == []
    assert all(x["reason"] == "org rule failed" for x in result.excluded
               if any(t.get("rule") == "org" for t in x["trace"]))


def test_clique_rules_filter(planted, gap_landscape):
    cond = ConditionSet.from_dict(
        {"clique_rules": [{"field": "member_count", "comparator": ">", "value": 10**6}]}
    )
    result = run_planted_gap(planted, gap_landscape, 0.0, cond=cond)
    assert result.org_ids == []


def test_clique_age_rule(planted, gap_landscape):
    # every planted clique saw activity within the covered span
    span_days = (planted["ledger"]["n_years"] + 1) * 366
    cond = ConditionSet.from_dict(
        {
            "clique_rules": [
                {"field": "newest_activity_age_days", "comparator": "<=", "value": span_days}
            ]
        }
    )
    ledger_gap = planted["ledger"]["gap"]
    result = run_planted_gap(planted, gap_landscape, ledger_gap["theta"], cond=cond)
    assert set(result.org_ids) == set(ledger_gap["competitors"])


def test_trace_covers_every_decision(planted, gap_landscape):
    result = run_planted_gap(planted, gap_landscape, 0.5)
    for entry in result.entries:
        kpi_steps = [t for t in entry.trace if t.get("rule") == "kpi_distance"]
        assert kpi_steps and kpi_steps[-1]["passed"]
        assert kpi_steps[-1]["value"] == pytest.approx(entry.distance)
    for exc in result.excluded:
        assert exc["reason"]
        assert "org" in exc
    mentioned = {e.org for e in result.entries} | {x["org"] for x in result.excluded}
    ego_or_me = {planted["ledger"]["gap"]["me"], *planted["ledger"]["gap"]["partners"]}
    assert mentioned.isdisjoint(ego_or_me)


def test_unknown_me(planted, gap_landscape):
    query = make_query(gap_landscape.landscape_id, "Nonexistent Org", 0.5)
    with pytest.raises(UnknownOrganization):
        run_gap(gap_landscape, planted["workspace"].snapshot, query)


def test_result_dict_serializable(planted, gap_landscape):
    from techgap.util import canonical_json

    result = run_planted_gap(planted, gap_landscape, 0.5)
    text = canonical_json(result.as_dict())
    assert '"results"' in text and '"excluded"' in text
