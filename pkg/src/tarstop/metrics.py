"""Per-topic and aggregate evaluation of stopping outcomes.

Covers effort, acceptability, reliability, percentage of effort saved, the
normalized area under the cumulative recall curve (AURC), and AURC-based
stratification of runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from tarstop.core import Run, StopOutcome, Topic


@dataclass(frozen=True)
class TopicResult:
    topic_id: str
    effort: int
    recall: float
    acceptable: bool


@dataclass(frozen=True)
class MethodReport:
    """Aggregated metrics of one method over one run (or a set of runs)."""

    method_name: str
    per_topic: tuple[TopicResult, ...]
    total_effort: int
    reliability: float
    mean_pct_effort_saved: float


def recall_of(outcome: StopOutcome, topic: Topic) -> float:
    """Fraction of the topic's relevant documents inside the examined set."""
    total = topic.total_relevant
    if total < 1:
        raise ValueError(f"topic {topic.topic_id!r} has no relevant documents")
    return outcome.relevant_found / total


def acceptability(outcome: StopOutcome, topic: Topic, target_recall: float) -> int:
    """1 iff the stopped review reached the target recall (non-strict)."""
    return 1 if recall_of(outcome, topic) >= target_recall else 0


def reliability(acceptable_flags: list[bool]) -> float:
    """Fraction of topics whose outcome is acceptable."""
    if not acceptable_flags:
        raise ValueError("reliability of an empty topic set is undefined")
    return sum(1 for a in acceptable_flags if a) / len(acceptable_flags)


def pct_effort_saved(outcomes: list[tuple[StopOutcome, Topic]]) -> float:
    """Mean per-topic percentage of documents that went unexamined.

    Per-topic saved fractions are floored at 0 (extra samples can push
    effort past the topic size).
    """
    if not outcomes:
        raise ValueError("pct_effort_saved of an empty set is undefined")
    saved = [
        max(0.0, (topic.size - outcome.effort) / topic.size)
        for outcome, topic in outcomes
    ]
    return 100.0 * sum(saved) / len(saved)


def aurc(topic: Topic) -> float:
    """Area under the cumulative recall curve, normalized by the optimal area.

    Unit-step sum of recall after each judged document; the optimal area is
    that of the ranking placing all relevant documents first.
    """
    total = topic.total_relevant
    n = topic.size
    if total < 1:
        raise ValueError(f"topic {topic.topic_id!r} has no relevant documents")
    area = sum(topic._cumrel[r] for r in range(1, n + 1)) / total
    optimal = sum(min(r, total) for r in range(1, n + 1)) / total
    return area / optimal


def mean_aurc(run: Run) -> float:
    """Mean AURC over a run's topics."""
    return sum(aurc(t) for t in run.topics) / len(run.topics)


def stratify_runs(runs: list[Run]) -> tuple[list[Run], list[Run], list[Run]]:
    """Split runs into (top five, middle five, bottom five) by mean AURC.

    The middle five are centered on the 1-based median position of the
    AURC-sorted list; ties break lexicographically by run_tag.
    """
    if len(runs) < 15:
        raise ValueError("stratification needs at least 15 runs")
    ranked = sorted(runs, key=lambda r: (-mean_aurc(r), r.run_tag))
    median_pos = (len(ranked) + 1) // 2  # 1-based
    mid_start = median_pos - 3  # 0-based start of the centered window
    return ranked[:5], ranked[mid_start : mid_start + 5], ranked[-5:]


def build_report(
    method_name: str,
    outcomes: list[tuple[StopOutcome, Topic]],
    target_recall: float,
) -> MethodReport:
    """Aggregate one method's outcomes over a set of topics."""
    per_topic = tuple(
        TopicResult(
            topic_id=topic.topic_id,
            effort=outcome.effort,
            recall=recall_of(outcome, topic),
            acceptable=bool(acceptability(outcome, topic, target_recall)),
        )
        for outcome, topic in outcomes
    )
    return MethodReport(
        method_name=method_name,
        per_topic=per_topic,
        total_effort=sum(t.effort for t in per_topic),
        reliability=reliability([t.acceptable for t in per_topic]),
        mean_pct_effort_saved=pct_effort_saved(outcomes),
    )
