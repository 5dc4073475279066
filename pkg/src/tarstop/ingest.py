"""Parsing of run and qrels files into Runs and Topics.

Run files carry 6 whitespace-separated columns
(``topic_id flag doc_id rank score run_tag``); qrels carry 4
(``topic_id unused doc_id label``), with label > 0 meaning relevant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from tarstop.core import Run, Topic
from tarstop.errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

# Sanity statistics of the CLEF 2017 e-Health Task 2 test collection.
CLEF2017_STATS = {
    "topic_count": 30,
    "total_docs": 117_562,
    "size_min": 64,
    "size_max": 12_807,
    "size_median": 2_070,
    "relevant_min": 2,
    "relevant_max": 460,
    "relevant_median": 38,
    "relevant_fraction": 0.0158,
}


@dataclass(frozen=True)
class RunFileRecord:
    topic_id: str
    flag: str  # ignored iteration/feedback column ("NF", "Q0", ...)
    doc_id: str
    rank: int
    score: float
    run_tag: str


def _parse_run_line(line: str, line_no: int) -> RunFileRecord:
    parts = line.split()
    if len(parts) != 6:
        raise ParseError(f"expected 6 fields, got {len(parts)}: {line!r}", line_no)
    topic_id, flag, doc_id, rank_s, score_s, run_tag = parts
    try:
        rank = int(rank_s)
        score = float(score_s)
    except ValueError as exc:
        raise ParseError(f"bad rank/score: {exc}", line_no) from exc
    if rank < 1:
        raise ParseError(f"rank must be >= 1, got {rank}", line_no)
    return RunFileRecord(topic_id, flag, doc_id, rank, score, run_tag)


def parse_run(lines: Iterable[str] | TextIO) -> Run:
    """Parse a run file into a Run of unlabeled Topics.

    Documents are ordered by ascending rank (ties broken by descending score
    then doc_id); non-contiguous ranks are repaired by re-ranking in sorted
    order, with a warning.
    """
    by_topic: dict[str, list[RunFileRecord]] = {}
    run_tag = None
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _parse_run_line(line, line_no)
        if run_tag is None:
            run_tag = record.run_tag
        by_topic.setdefault(record.topic_id, []).append(record)
    if run_tag is None:
        raise ParseError("empty run file")

    topics = []
    for topic_id, records in by_topic.items():
        seen = {r.doc_id for r in records}
        if len(seen) != len(records):
            raise ValidationError(
                f"duplicate (topic, doc) pair in topic {topic_id!r}"
            )
        records.sort(key=lambda r: (r.rank, -r.score, r.doc_id))
        ranks = [r.rank for r in records]
        if ranks != list(range(1, len(records) + 1)):
            logger.warning(
                "run %s topic %s: non-contiguous ranks repaired by re-ranking",
                run_tag,
                topic_id,
            )
        topics.append(
            Topic(topic_id=topic_id, docs=tuple((r.doc_id, False) for r in records))
        )
    return Run(run_tag=run_tag, topics=tuple(topics))


def serialize_run(run: Run) -> list[str]:
    """Render a Run back to run-file lines (score = 1/rank, flag = 'NF')."""
    lines = []
    for topic in run.topics:
        for i, (doc_id, _) in enumerate(topic.docs, start=1):
            lines.append(
                f"{topic.topic_id} NF {doc_id} {i} {1.0 / i:.6f} {run.run_tag}"
            )
    return lines


def parse_qrels(lines: Iterable[str] | TextIO) -> dict[str, set[str]]:
    """Parse a qrels file into topic_id -> set of relevant doc_ids."""
    labels: dict[tuple[str, str], int] = {}
    relevant: dict[str, set[str]] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(
                f"expected 4 fields, got {len(parts)}: {line!r}", line_no
            )
        topic_id, _, doc_id, label_s = parts
        try:
            label = int(label_s)
        except ValueError as exc:
            raise ParseError(f"bad label: {exc}", line_no) from exc
        key = (topic_id, doc_id)
        if key in labels and labels[key] != label:
            raise ValidationError(
                f"conflicting labels for topic {topic_id!r} doc {doc_id!r}"
            )
        labels[key] = label
        relevant.setdefault(topic_id, set())
        if label > 0:
            relevant[topic_id].add(doc_id)
    return relevant


def join(run: Run, qrels: dict[str, set[str]]) -> Run:
    """Attach relevance flags from qrels; order and membership are unchanged.

    Documents absent from the qrels are treated as non-relevant (counted and
    logged once per topic).
    """
    topics = []
    for topic in run.topics:
        if topic.topic_id not in qrels:
            raise ValidationError(
                f"topic {topic.topic_id!r} missing from qrels"
            )
        rel_docs = qrels[topic.topic_id]
        docs = tuple((doc_id, doc_id in rel_docs) for doc_id, _ in topic.docs)
        topics.append(Topic(topic_id=topic.topic_id, docs=docs))
    return Run(run_tag=run.run_tag, topics=tuple(topics))


def serialize_qrels(topics: Iterable[Topic]) -> list[str]:
    """Render topics' relevance labels as qrels lines."""
    lines = []
    for topic in topics:
        for doc_id, rel in topic.docs:
            lines.append(f"{topic.topic_id} 0 {doc_id} {1 if rel else 0}")
    return lines


@dataclass
class ValidationSummary:
    """Dataset statistics with pass/warn checks against the published figures."""

    topic_count: int
    total_docs: int
    size_min: int
    size_max: int
    size_median: float
    relevant_min: int
    relevant_max: int
    relevant_median: float
    relevant_fraction: float
    checks: list[tuple[str, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "topic_count": self.topic_count,
            "total_docs": self.total_docs,
            "size_min": self.size_min,
            "size_max": self.size_max,
            "size_median": self.size_median,
            "relevant_min": self.relevant_min,
            "relevant_max": self.relevant_max,
            "relevant_median": self.relevant_median,
            "relevant_fraction": self.relevant_fraction,
            "checks": [list(c) for c in self.checks],
        }


def _median(values: list[int]) -> float:
    values = sorted(values)
    m = len(values) // 2
    if len(values) % 2:
        return float(values[m])
    return (values[m - 1] + values[m]) / 2.0


def validate_dataset(runs: list[Run], qrels: dict[str, set[str]]) -> ValidationSummary:
    """Summarize topic sizes and relevant counts, checking the known figures.

    Mismatches against the published collection statistics are reported as
    warnings in ``checks``, never as errors; synthetic datasets simply fail
    every check with a 'warn'.
    """
    if not runs:
        raise ValidationError("no runs to validate")
    topics = runs[0].topics
    sizes = [t.size for t in topics]
    joined = join(runs[0], qrels)
    relevant = [t.total_relevant for t in joined.topics]

    summary = ValidationSummary(
        topic_count=len(topics),
        total_docs=sum(sizes),
        size_min=min(sizes),
        size_max=max(sizes),
        size_median=_median(sizes),
        relevant_min=min(relevant),
        relevant_max=max(relevant),
        relevant_median=_median(relevant),
        relevant_fraction=sum(relevant) / sum(sizes),
    )
    expected = CLEF2017_STATS
    checks = [
        ("topic_count", summary.topic_count == expected["topic_count"]),
        ("total_docs", summary.total_docs == expected["total_docs"]),
        ("size_min", summary.size_min == expected["size_min"]),
        ("size_max", summary.size_max == expected["size_max"]),
        ("size_median", summary.size_median == expected["size_median"]),
        ("relevant_min", summary.relevant_min == expected["relevant_min"]),
        ("relevant_max", summary.relevant_max == expected["relevant_max"]),
        ("relevant_median", summary.relevant_median == expected["relevant_median"]),
        (
            "relevant_fraction",
            abs(summary.relevant_fraction - expected["relevant_fraction"]) < 5e-4,
        ),
    ]
    summary.checks = [(name, "pass" if ok else "warn") for name, ok in checks]
    return summary
