import pytest

from tarstop.core import Topic


def make_topic(topic_id: str, relevant_ranks: set[int], n: int) -> Topic:
    """Topic of size n with relevance at the given 1-based ranks."""
    return Topic(
        topic_id=topic_id,
        docs=tuple((f"doc{i}", i in relevant_ranks) for i in range(1, n + 1)),
    )


@pytest.fixture
def small_topic():
    return make_topic("small", {1, 3}, 5)
