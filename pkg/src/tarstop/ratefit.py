"""Exponential rate estimation from an examined ranking prefix.

The examined ranks are split into contiguous sub-intervals; the per-rank
density of relevant documents in each sub-interval, plotted at the
sub-interval midpoint, is fitted with d * exp(k * x) by least squares.
Fitting densities (counts divided by sub-interval width) keeps the
continuous integral and the per-rank sum used by the fit-accuracy gate
mutually consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from tarstop.core import Topic, rel_at
from tarstop.errors import (
    ComputationError,
    FitError,
    InsufficientDataError,
    NoSignalError,
)
from tarstop.poisson import _MAX_EXP_ARG, RateModel

_MAX_ITER = 200


@dataclass(frozen=True)
class BinnedCounts:
    """Relevant-document counts per contiguous rank sub-interval.

    ``points`` pairs each sub-interval midpoint with its relevant count;
    ``widths`` holds the matching sub-interval sizes (the last interval may
    be short).
    """

    points: tuple[tuple[float, int], ...]
    interval_width: float
    widths: tuple[int, ...]


def bin_prefix(topic: Topic, examined_end: int, interval_width: float) -> BinnedCounts:
    """Partition ranks 1..examined_end into sub-intervals of the given width."""
    if not 1 <= examined_end <= topic.size:
        raise ValueError(f"examined_end {examined_end} out of range 1..{topic.size}")
    if interval_width < 1:
        raise ValueError("interval_width must be >= 1")
    if examined_end < interval_width and examined_end < 2:
        raise InsufficientDataError(
            f"cannot bin {examined_end} ranks into intervals of width {interval_width}"
        )
    width = int(math.ceil(interval_width))
    points = []
    widths = []
    lo = 1
    while lo <= examined_end:
        hi = min(lo + width - 1, examined_end)
        midpoint = (lo + hi) / 2.0
        count = rel_at(topic, hi) - rel_at(topic, lo - 1)
        points.append((midpoint, count))
        widths.append(hi - lo + 1)
        lo = hi + 1
    return BinnedCounts(tuple(points), interval_width, tuple(widths))


def fit_exponential(binned: BinnedCounts) -> RateModel:
    """Least-squares fit of d * exp(k * x) to the per-rank densities.

    Optimizes over (ln d, k) so the amplitude stays positive; initialized by
    log-linear regression over the densities floored at half an event per
    interval.
    """
    if len(binned.points) < 2:
        raise InsufficientDataError("need at least 2 binned points to fit")
    x = np.array([p[0] for p in binned.points])
    y = np.array([p[1] for p in binned.points], dtype=float)
    w = np.array(binned.widths, dtype=float)
    if not np.any(y > 0):
        raise NoSignalError("no relevant documents in the examined prefix")
    dens = y / w

    # Log-linear init; the 0.5-event floor keeps empty intervals usable.
    log_dens = np.log(np.maximum(dens, 0.5 / w))
    k0, logd0 = np.polyfit(x, log_dens, 1)

    def residuals(theta):
        logd, k = theta
        arg = np.clip(logd + k * x, -_MAX_EXP_ARG, _MAX_EXP_ARG)
        return np.exp(arg) - dens

    result = least_squares(
        residuals,
        x0=np.array([logd0, k0]),
        method="trf",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-12,
        max_nfev=_MAX_ITER * 3,
    )
    if not result.success:
        raise FitError(f"rate fit did not converge: {result.message}")
    logd, k = result.x
    if not (math.isfinite(logd) and math.isfinite(k)):
        raise FitError("rate fit produced non-finite parameters")
    return RateModel(d=math.exp(logd), k=k)


def delta_gate(model: RateModel, topic: Topic, examined_end: int, delta: float) -> bool:
    """Accept the fitted rate iff observed relevant >= delta * predicted.

    The prediction is the discrete per-rank sum of the intensity over the
    examined prefix.
    """
    if examined_end < 1:
        raise ValueError("examined_end must be >= 1")
    predicted = predicted_relevant(model, examined_end)
    if predicted < 1e-12:  # vanished rate predicts 0 relevant; trivially met
        return True
    return rel_at(topic, examined_end) >= delta * predicted


def predicted_relevant(model: RateModel, examined_end: int) -> float:
    """Discrete per-rank sum of the intensity over ranks 1..examined_end."""
    arg = model.k * np.arange(1, examined_end + 1, dtype=float)
    if arg.max(initial=0.0) > _MAX_EXP_ARG:
        raise ComputationError("exp overflow summing the fitted rate")
    return float(model.d * np.exp(arg).sum())
