"""Domain types: topics, runs, stopping outcomes, and method parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

from tarstop.errors import ValidationError


@dataclass(frozen=True)
class Topic:
    """One ranked document list with binary relevance labels.

    ``docs`` holds ``(doc_id, relevant)`` pairs in ranked order; the document
    at list index ``i`` sits at rank ``i + 1``.
    """

    topic_id: str
    docs: tuple[tuple[str, bool], ...]
    # Cumulative relevant counts, index r = count over ranks 1..r.
    _cumrel: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.docs) < 1:
            raise ValidationError(f"topic {self.topic_id!r} has no documents")
        seen = set()
        for doc_id, _ in self.docs:
            if doc_id in seen:
                raise ValidationError(
                    f"topic {self.topic_id!r} has duplicate doc_id {doc_id!r}"
                )
            seen.add(doc_id)
        cum = [0]
        for _, rel in self.docs:
            cum.append(cum[-1] + (1 if rel else 0))
        object.__setattr__(self, "_cumrel", tuple(cum))

    @property
    def size(self) -> int:
        return len(self.docs)

    @property
    def total_relevant(self) -> int:
        return self._cumrel[-1]


@dataclass(frozen=True)
class Run:
    """A named collection of topics (one shared-task submission)."""

    run_tag: str
    topics: tuple[Topic, ...]

    def __post_init__(self):
        ids = [t.topic_id for t in self.topics]
        if len(ids) != len(set(ids)):
            raise ValidationError(f"run {self.run_tag!r} has duplicate topic_ids")


@dataclass(frozen=True)
class StopOutcome:
    """Result of applying a stopping method to one topic.

    ``stop_rank`` is the last examined ranked position.  ``extra_examined``
    counts examined documents outside the ranked prefix (random samples past
    the stopping rank).  ``predicted`` is False when the method fell back to
    examining everything.
    """

    topic_id: str
    stop_rank: int
    extra_examined: int
    relevant_found: int
    predicted: bool

    @property
    def effort(self) -> int:
        return self.stop_rank + self.extra_examined


@dataclass(frozen=True)
class MethodParams:
    """Tunable parameters shared by the stopping methods.

    Defaults follow the evaluated configuration: target recall 0.7 at 0.95
    confidence, an initial sample of 30% of the topic extended in 5% batches,
    at least 20 relevant documents required in the initial sample, a 0.7
    fit-accuracy multiplier, a 10-document target set, and a knee slope-ratio
    parameter of 150.
    """

    target_recall: float = 0.7
    confidence: float = 0.95
    alpha_frac: float = 0.3
    beta_frac: float = 0.05
    gamma: int = 20
    delta: float = 0.7
    target_count: int = 10
    epsilon: int = 150

    def __post_init__(self):
        if not 0 < self.target_recall <= 1:
            raise ValidationError("target_recall must be in (0, 1]")
        if not 0 < self.confidence < 1:
            raise ValidationError("confidence must be in (0, 1)")
        if not 0 < self.beta_frac <= self.alpha_frac <= 1:
            raise ValidationError("need 0 < beta_frac <= alpha_frac <= 1")
        if self.gamma < 1:
            raise ValidationError("gamma must be >= 1")
        if not 0 < self.delta <= 1:
            raise ValidationError("delta must be in (0, 1]")
        if self.target_count < 1:
            raise ValidationError("target_count must be >= 1")
        if self.epsilon < 0:
            raise ValidationError("epsilon must be >= 0")


def rel_at(topic: Topic, rank: int) -> int:
    """Count of relevant documents at ranks 1..rank (0 for the empty prefix)."""
    if not 0 <= rank <= topic.size:
        raise ValueError(f"rank {rank} out of range 0..{topic.size}")
    return topic._cumrel[rank]
