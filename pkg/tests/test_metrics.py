import pytest

from conftest import make_topic
from tarstop.core import Run, StopOutcome
from tarstop.metrics import (
    acceptability,
    aurc,
    mean_aurc,
    pct_effort_saved,
    recall_of,
    reliability,
    stratify_runs,
)


def outcome(topic_id, stop_rank, extra=0, relevant=0, predicted=True):
    return StopOutcome(topic_id, stop_rank, extra, relevant, predicted)


def test_recall_of_simple():
    topic = make_topic("t", set(range(1, 11)), 20)
    assert recall_of(outcome("t", 7, relevant=7), topic) == pytest.approx(0.7)


def test_recall_of_full_review():
    topic = make_topic("t", {3, 9}, 10)
    assert recall_of(outcome("t", 10, relevant=2), topic) == 1.0


def test_recall_of_counts_extra_samples():
    # Prefix holds 6 of 10; one more relevant found among extra samples.
    topic = make_topic("t", set(range(1, 11)), 100)
    out = outcome("t", 6, extra=3, relevant=7)
    assert recall_of(out, topic) == pytest.approx(0.7)


def test_recall_of_rejects_zero_relevant():
    topic = make_topic("t", set(), 5)
    with pytest.raises(ValueError):
        recall_of(outcome("t", 5), topic)


def test_acceptability_boundary_non_strict():
    topic = make_topic("t", set(range(1, 11)), 20)
    assert acceptability(outcome("t", 7, relevant=7), topic, 0.7) == 1


def test_acceptability_below():
    topic = make_topic("t", set(range(1, 1001)), 2000)
    assert acceptability(outcome("t", 699, relevant=699), topic, 0.7) == 0


def test_acceptability_full_recall():
    topic = make_topic("t", {1}, 5)
    assert acceptability(outcome("t", 1, relevant=1), topic, 1.0) == 1


def test_reliability_values():
    assert reliability([True] * 19 + [False]) == pytest.approx(0.95)
    assert reliability([True] * 5) == 1.0
    assert reliability([True] * 29 + [False]) == pytest.approx(29 / 30)


def test_pct_effort_saved_full_reviews():
    topics = [make_topic(f"t{i}", {1}, 100) for i in range(3)]
    pairs = [(outcome(t.topic_id, 100, relevant=1), t) for t in topics]
    assert pct_effort_saved(pairs) == 0.0


def test_pct_effort_saved_single():
    topic = make_topic("t", {1}, 100)
    assert pct_effort_saved([(outcome("t", 30, relevant=1), topic)]) == pytest.approx(
        70.0
    )


def test_pct_effort_saved_mean_of_fractions():
    t1 = make_topic("a", {1}, 100)
    t2 = make_topic("b", {1}, 200)
    pairs = [(outcome("a", 50, relevant=1), t1), (outcome("b", 100, relevant=1), t2)]
    assert pct_effort_saved(pairs) == pytest.approx(50.0)


def test_pct_effort_saved_floors_extras():
    topic = make_topic("t", {1}, 10)
    pairs = [(outcome("t", 10, extra=5, relevant=1), topic)]
    assert pct_effort_saved(pairs) == 0.0


def test_aurc_perfect_ranking():
    topic = make_topic("t", {1, 2, 3}, 10)
    assert aurc(topic) == 1.0


def test_aurc_hand_examples():
    topic = make_topic("t", {3, 4}, 4)
    assert aurc(topic) == pytest.approx(1.5 / 3.5, abs=1e-9)
    topic2 = make_topic("t", {2}, 2)
    assert aurc(topic2) == pytest.approx(0.5, abs=1e-9)


def test_aurc_reversal_never_increases():
    topic = make_topic("t", {1, 2, 5}, 8)
    reversed_topic = make_topic(
        "t", {8 + 1 - r for r in {1, 2, 5}}, 8
    )
    assert aurc(reversed_topic) <= aurc(topic)


def _run_with_aurc(tag, good):
    # Relevant-first topics score 1.0; relevant-last score lower.
    topic = make_topic("x", {1, 2} if good else {7, 8}, 8)
    return Run(tag, (topic,))


def test_stratify_15_runs():
    runs = [_run_with_aurc(f"r{i:02d}", good=i < 8) for i in range(15)]
    top, middle, bottom = stratify_runs(runs)
    assert [len(g) for g in (top, middle, bottom)] == [5, 5, 5]
    ranked = sorted(runs, key=lambda r: (-mean_aurc(r), r.run_tag))
    assert top == ranked[:5]
    assert middle == ranked[5:10]
    assert bottom == ranked[10:]


def test_stratify_33_runs_middle_window():
    runs = [_run_with_aurc(f"r{i:02d}", good=i % 2 == 0) for i in range(33)]
    ranked = sorted(runs, key=lambda r: (-mean_aurc(r), r.run_tag))
    _, middle, _ = stratify_runs(runs)
    assert middle == ranked[14:19]  # 1-based positions 15..19


def test_stratify_ties_break_by_tag():
    runs = [_run_with_aurc(f"r{i:02d}", good=True) for i in range(15)]
    top, middle, bottom = stratify_runs(runs)
    tags = [r.run_tag for r in top + middle + bottom]
    assert tags == sorted(tags)


def test_stratify_requires_15():
    runs = [_run_with_aurc(f"r{i}", good=True) for i in range(14)]
    with pytest.raises(ValueError):
        stratify_runs(runs)
