"""Deal files: parsing, error collection with locations, round trips."""

from __future__ import annotations

import copy
import json
from pathlib import Path

import pytest

from peal.dealfile import (
    DealFileError,
    parse_deal,
    parse_deal_document,
    serialize_package,
    validate_document,
)

DEMO = Path(__file__).resolve().parent.parent / "deals" / "demo.json"


@pytest.fixture()
def demo_doc():
    return json.loads(DEMO.read_text())


def test_demo_deal_is_valid(demo_doc):
    assert validate_document(demo_doc) == []


def test_round_trip_is_lossless(demo_doc):
    pkg = parse_deal_document(demo_doc)
    doc2 = serialize_package(pkg)
    assert doc2 == demo_doc
    assert serialize_package(parse_deal_document(doc2)) == doc2


def test_version_gate(demo_doc):
    demo_doc["peal_version"] = "0"
    with pytest.raises(DealFileError, match="peal_version"):
        parse_deal_document(demo_doc)


def test_empty_portfolio_list(demo_doc):
    demo_doc["portfolios"] = []
    errors = validate_document(demo_doc)
    assert any("K >= 1" in e for e in errors)


def test_errors_are_collected_with_paths(demo_doc):
    demo_doc["portfolios"][0]["exposures"][0]["capital"][1] = "oops"
    demo_doc["alpha"] = "2"
    with pytest.raises(DealFileError) as exc:
        parse_deal_document(demo_doc)
    errors = exc.value.errors
    assert any("portfolios[0].exposures[0].capital[1]" in e for e in errors)
    assert any(e.startswith("alpha") for e in errors)
    assert len(errors) >= 2


def test_bad_vertical_split_is_located(demo_doc):
    demo_doc["design"]["v_weights"][-1] = ["0.9", "0.2"]
    errors = validate_document(demo_doc)
    assert any("design" in e and "sum" in e for e in errors)


def test_note_share_count_must_match_design(demo_doc):
    demo_doc["pricing"]["cpy"] = ["0.5", "0.5"]
    errors = validate_document(demo_doc)
    assert any("cpy" in e and "note shares" in e for e in errors)


def test_note_shares_must_sum_to_one(demo_doc):
    demo_doc["pricing"]["cpy"] = ["0.4", "0.3", "0.1", "0.1"]
    errors = validate_document(demo_doc)
    assert any("100%" in e for e in errors)


def test_incompatible_frequencies_are_reported(demo_doc):
    # Quarterly above monthly breaks the non-increasing vertical rule.
    demo_doc["frequencies"] = [4, 4, 12, 12, 12, 12, 1, 1]
    errors = validate_document(demo_doc)
    assert any(e.startswith("frequencies") for e in errors)


def test_scenario_count_must_be_positive(demo_doc):
    demo_doc["scenarios"]["count"] = 0
    errors = validate_document(demo_doc)
    assert any("scenarios.count" in e for e in errors)


def test_unparseable_json_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(DealFileError, match="not valid JSON"):
        parse_deal(bad)


def test_parse_deal_reads_demo_file():
    pkg = parse_deal(DEMO)
    assert pkg.deal.tp == 24
    assert pkg.design.y == 4
    assert sum(pkg.cpy) == 1
