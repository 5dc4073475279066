"""Synthetic topic generation and statistical validation experiments.

Topics are generated by independent per-rank Bernoulli draws against a
parameterized relevance-rate family (discrete thinning), which matches the
at-most-one-event-per-rank data model.  The coverage experiment checks that
the credible upper bound on the total relevant count holds empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tarstop.core import MethodParams, Topic
from tarstop.errors import ComputationError, NoSignalError
from tarstop.poisson import lambda_integral, upper_credible_count
from tarstop.ratefit import bin_prefix, fit_exponential


@dataclass(frozen=True)
class ExponentialRate:
    """Per-rank relevance probability d * exp(k * i), clipped to [0, 1]."""

    d: float
    k: float

    def __post_init__(self):
        if self.d <= 0 or not math.isfinite(self.d) or not math.isfinite(self.k):
            raise ValueError("exponential rate needs finite d > 0 and finite k")

    def probabilities(self, n: int) -> np.ndarray:
        ranks = np.arange(1, n + 1, dtype=float)
        return np.clip(self.d * np.exp(self.k * ranks), 0.0, 1.0)


@dataclass(frozen=True)
class UniformRate:
    """Constant per-rank relevance probability."""

    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("uniform rate needs p in [0, 1]")

    def probabilities(self, n: int) -> np.ndarray:
        return np.full(n, self.p)


@dataclass(frozen=True)
class StepRate:
    """Probability p up to the cutoff rank, then 0."""

    p: float
    cutoff: int

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("step rate needs p in [0, 1]")
        if self.cutoff < 0:
            raise ValueError("step rate needs cutoff >= 0")

    def probabilities(self, n: int) -> np.ndarray:
        probs = np.zeros(n)
        probs[: min(self.cutoff, n)] = self.p
        return probs


@dataclass(frozen=True)
class BimodalRate:
    """Probability p1 up to the cutoff rank, p2 afterwards."""

    p1: float
    p2: float
    cutoff: int

    def __post_init__(self):
        if not (0 <= self.p1 <= 1 and 0 <= self.p2 <= 1):
            raise ValueError("bimodal rate needs p1, p2 in [0, 1]")
        if self.cutoff < 0:
            raise ValueError("bimodal rate needs cutoff >= 0")

    def probabilities(self, n: int) -> np.ndarray:
        probs = np.full(n, self.p2)
        probs[: min(self.cutoff, n)] = self.p1
        return probs


RateFamily = ExponentialRate | UniformRate | StepRate | BimodalRate


def gen_topic(n: int, rate_family: RateFamily, seed: int) -> Topic:
    """Generate a seeded synthetic topic from a relevance-rate family."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    probs = rate_family.probabilities(n)
    flags = rng.random(n) < probs
    docs = tuple((f"d{i:07d}", bool(flags[i - 1])) for i in range(1, n + 1))
    return Topic(topic_id=f"synthetic-{seed}", docs=docs)


def coverage_experiment(
    rate_family: RateFamily,
    n: int,
    trials: int,
    params: MethodParams,
    seed: int = 0,
) -> float:
    """Empirical coverage of the credible upper bound over seeded trials.

    Each trial generates a topic, fits the rate to the whole topic (binned
    at the batch width), and tests whether the true relevant count is at or
    below the credible bound.  Topics with no relevant documents are covered
    trivially (bound 0); fit failures count as misses.
    """
    if trials < 100:
        raise ValueError("trials must be >= 100")
    batch = max(1, math.ceil(params.beta_frac * n))
    covered = 0
    for trial in range(trials):
        topic = gen_topic(n, rate_family, seed=seed + trial)
        total = topic.total_relevant
        if total == 0:
            covered += 1
            continue
        try:
            model = fit_exponential(bin_prefix(topic, n, batch))
            mean = lambda_integral(model, n)
            bound = upper_credible_count(mean, params.confidence)
        except (NoSignalError, ComputationError):
            continue
        if total <= bound:
            covered += 1
    return covered / trials


def make_rate_family(name: str, args: dict[str, float]) -> RateFamily:
    """Build a rate family from a name and keyword arguments."""
    families = {
        "exponential": lambda: ExponentialRate(d=args["d"], k=args["k"]),
        "uniform": lambda: UniformRate(p=args["p"]),
        "step": lambda: StepRate(p=args["p"], cutoff=int(args["cutoff"])),
        "bimodal": lambda: BimodalRate(
            p1=args["p1"], p2=args["p2"], cutoff=int(args["cutoff"])
        ),
    }
    if name not in families:
        raise ValueError(f"unknown rate family {name!r}")
    try:
        return families[name]()
    except KeyError as exc:
        raise ValueError(f"rate family {name!r} missing parameter {exc}") from exc
