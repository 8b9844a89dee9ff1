import pytest

from argsum.errors import ParseFailure
from argsum.llm.parsing import (
    CountMarker,
    parse_cluster_keypoints,
    parse_count,
    parse_keypoints,
)
from argsum.llm.prompts import enumerate_lines
from tests.conftest import FIXTURES, load_jsonl

CASES = load_jsonl(FIXTURES / "transcripts.jsonl")


def _ids(case):
    return f"{case['kind']}-{case['raw'][:28]!r}"


def test_fixture_has_thirty_items():
    assert len(CASES) == 30


@pytest.mark.parametrize("case", [c for c in CASES if c["kind"] == "keypoints"], ids=_ids)
def test_keypoints_fixture(case):
    if case["expect"] is None:
        with pytest.raises(ParseFailure):
            parse_keypoints(case["raw"], case["max_allowed"], case["kp_token_length"])
        return
    parsed = parse_keypoints(case["raw"], case["max_allowed"], case["kp_token_length"])
    assert list(parsed.texts) == case["expect"]
    assert list(parsed.over_length) == case["over_length"]
    assert parsed.truncated is case["truncated"]


@pytest.mark.parametrize("case", [c for c in CASES if c["kind"] == "clusters"], ids=_ids)
def test_clusters_fixture(case):
    if case["expect"] is None:
        with pytest.raises(ParseFailure):
            parse_cluster_keypoints(case["raw"], case["cluster_ids"])
        return
    mapping, missing = parse_cluster_keypoints(case["raw"], case["cluster_ids"])
    assert {str(k): v for k, v in mapping.items()} == case["expect"]
    assert missing == case["missing"]


@pytest.mark.parametrize(
    "case", [c for c in CASES if c["kind"] in ("coverage", "uniqueness")], ids=_ids
)
def test_counts_fixture(case):
    marker = CountMarker.COVERAGE if case["kind"] == "coverage" else CountMarker.UNIQUENESS
    if case["expect"] is None:
        with pytest.raises(ParseFailure):
            parse_count(case["raw"], marker)
        return
    assert parse_count(case["raw"], marker) == case["expect"]


class TestRoundTrip:
    @pytest.mark.parametrize("n", [1, 3, 8, 20])
    def test_enumerate_then_parse_recovers_items(self, n):
        texts = [f"Key point number {i} about uniforms" for i in range(n)]
        rendered = enumerate_lines(texts)
        parsed = parse_keypoints(rendered, max_allowed=n, kp_token_length=50)
        assert list(parsed.texts) == texts


class TestCountGranularity:
    @pytest.mark.parametrize("value", ["0", "0.5", "1", "2.5", "17", "17.5"])
    def test_half_grid_accepted(self, value):
        assert parse_count(f"Coverage count: {value}", CountMarker.COVERAGE) == float(value)

    @pytest.mark.parametrize("value", ["0.1", "2.51", "3.3333", "-0.5", "-3"])
    def test_rejections(self, value):
        with pytest.raises(ParseFailure):
            parse_count(f"Coverage count: {value}", CountMarker.COVERAGE)

    def test_marker_must_match_kind(self):
        with pytest.raises(ParseFailure):
            parse_count("Coverage count: 3", CountMarker.UNIQUENESS)

    def test_last_marker_wins_multiline(self):
        raw = "Number of Unique Main Statements: 3\nActually:\nNumber of Unique Main Statements: 5"
        assert parse_count(raw, CountMarker.UNIQUENESS) == 5.0


def test_cluster_ids_required():
    with pytest.raises(ValueError):
        parse_cluster_keypoints("Cluster 0: x", [])
