import pytest

from tarstop.errors import ParseError, ValidationError
from tarstop.ingest import (
    join,
    parse_qrels,
    parse_run,
    serialize_qrels,
    serialize_run,
    validate_dataset,
)

RUN_LINES = [
    "CD010775 NF 19307324 1 0.2715 Test-Data-Sheffield-run-2",
    "CD010775 NF 10503898 2 0.2612 Test-Data-Sheffield-run-2",
    "CD010775 NF 18850670 3 0.2440 Test-Data-Sheffield-run-2",
    "CD008122 Q0 11111111 1 0.9000 Test-Data-Sheffield-run-2",
    "CD008122 Q0 22222222 2 0.8000 Test-Data-Sheffield-run-2",
]

QREL_LINES = [
    "CD010775 0 18850670 1",
    "CD010775 0 10503898 0",
    "CD010775 0 19307324 1",
    "CD008122 0 11111111 1",
    "CD008122 0 22222222 0",
]


def test_parse_run_single_record():
    run = parse_run([RUN_LINES[0]])
    assert run.run_tag == "Test-Data-Sheffield-run-2"
    topic = run.topics[0]
    assert topic.topic_id == "CD010775"
    assert topic.docs == (("19307324", False),)


def test_parse_run_empty_input():
    with pytest.raises(ParseError):
        parse_run([])


def test_parse_run_interleaved_topics():
    interleaved = [RUN_LINES[0], RUN_LINES[3], RUN_LINES[1], RUN_LINES[4], RUN_LINES[2]]
    run = parse_run(interleaved)
    assert len(run.topics) == 2
    by_id = {t.topic_id: t for t in run.topics}
    assert [d for d, _ in by_id["CD010775"].docs] == [
        "19307324",
        "10503898",
        "18850670",
    ]
    assert [d for d, _ in by_id["CD008122"].docs] == ["11111111", "22222222"]


def test_parse_run_malformed_line_reports_number():
    with pytest.raises(ParseError, match="line 2"):
        parse_run([RUN_LINES[0], "too few fields"])


def test_parse_run_duplicate_doc():
    with pytest.raises(ValidationError):
        parse_run([RUN_LINES[0], RUN_LINES[0].replace(" 1 ", " 2 ")])


def test_parse_run_repairs_rank_gaps():
    gapped = [
        "T1 NF a 2 0.9 tag",
        "T1 NF b 10 0.5 tag",
        "T1 NF c 30 0.1 tag",
    ]
    run = parse_run(gapped)
    assert [d for d, _ in run.topics[0].docs] == ["a", "b", "c"]


def test_parse_run_rank_ties_by_score():
    tied = ["T1 NF low 1 0.2 tag", "T1 NF high 1 0.9 tag"]
    run = parse_run(tied)
    assert [d for d, _ in run.topics[0].docs] == ["high", "low"]


def test_parse_qrels_labels():
    qrels = parse_qrels(QREL_LINES)
    assert "18850670" in qrels["CD010775"]
    assert "10503898" not in qrels["CD010775"]


def test_parse_qrels_conflicting_duplicate():
    with pytest.raises(ValidationError):
        parse_qrels(["T1 0 a 1", "T1 0 a 0"])


def test_parse_qrels_malformed():
    with pytest.raises(ParseError, match="line 1"):
        parse_qrels(["only three fields x"])


def test_join_sets_flags():
    run = parse_run(RUN_LINES)
    joined = join(run, parse_qrels(QREL_LINES))
    topic = {t.topic_id: t for t in joined.topics}["CD010775"]
    assert dict(topic.docs) == {
        "19307324": True,
        "10503898": False,
        "18850670": True,
    }


def test_join_missing_doc_is_nonrelevant():
    run = parse_run(["T1 NF known 1 0.9 tag", "T1 NF unknown 2 0.5 tag"])
    joined = join(run, {"T1": {"known"}})
    assert dict(joined.topics[0].docs) == {"known": True, "unknown": False}


def test_join_missing_topic_errors():
    run = parse_run(RUN_LINES)
    with pytest.raises(ValidationError):
        join(run, {"CD010775": set()})


def test_join_preserves_order():
    run = parse_run(RUN_LINES)
    joined = join(run, parse_qrels(QREL_LINES))
    for before, after in zip(run.topics, joined.topics):
        assert [d for d, _ in before.docs] == [d for d, _ in after.docs]


def test_run_round_trip():
    joined = join(parse_run(RUN_LINES), parse_qrels(QREL_LINES))
    reparsed = join(
        parse_run(serialize_run(joined)), parse_qrels(serialize_qrels(joined.topics))
    )
    assert reparsed == joined


def test_validate_synthetic_dataset_warns():
    runs = [parse_run(RUN_LINES)]
    summary = validate_dataset(runs, parse_qrels(QREL_LINES))
    assert summary.topic_count == 2
    assert summary.total_docs == 5
    assert all(status == "warn" for _, status in summary.checks)
