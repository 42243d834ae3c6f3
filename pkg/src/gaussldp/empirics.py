"""Monte Carlo estimates of exponential decay rates of rare events.

Probabilities are estimated by direct counting over counter-seeded
replicates; ``log P(n)`` is then regressed on ``n`` and the negated slope is
compared with the infimum of the rate function over the event.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import legendre, rates, seeding
from .model import Ar1Params, Ma1Params, ProcessParams, paths, prefix_statistics

log = logging.getLogger(__name__)

INF = math.inf
STATISTICS = ("quad_mean", "lag1_cov", "yule_walker", "sample_mean", "w_pair", "s_pair")
KINDS = ("tail_ge", "tail_le", "ball")


class EstimationError(RuntimeError):
    pass


class UnsupportedEventError(ValueError):
    pass


@dataclass(frozen=True)
class EventSpec:
    """``statistic >= level``, ``statistic <= level`` or a closed ball.

    For balls ``level`` is ``(center, radius)``; the center is a float for
    scalar statistics and an ``(x, y)`` pair for ``w_pair`` / ``s_pair``.
    """

    statistic: str
    kind: str
    level: object

    def __post_init__(self):
        if self.statistic not in STATISTICS:
            raise UnsupportedEventError(f"unknown statistic {self.statistic!r}")
        if self.kind not in KINDS:
            raise UnsupportedEventError(f"unknown event kind {self.kind!r}")
        bivariate = self.statistic in ("w_pair", "s_pair")
        if bivariate and self.kind != "ball":
            raise UnsupportedEventError("bivariate statistics only support ball events")
        if self.kind == "ball":
            _, radius = self.level
            if not radius > 0:
                raise UnsupportedEventError("ball radius must be positive")

    def contains(self, values):
        """Membership mask; ``values`` is an array, or a pair of arrays for balls in R^2."""
        if self.kind == "tail_ge":
            return values >= self.level
        if self.kind == "tail_le":
            return values <= self.level
        center, radius = self.level
        if self.statistic in ("w_pair", "s_pair"):
            return np.hypot(values[0] - center[0], values[1] - center[1]) <= radius
        return np.abs(values - center) <= radius


@dataclass
class RateEstimate:
    n_grid: list
    log_prob: list
    slope: float
    stderr: float
    replicates: int
    seed: int
    counts: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    intercept: float = 0.0


def _supports(params: ProcessParams, statistic: str) -> bool:
    if isinstance(params, Ma1Params):
        return statistic in ("quad_mean", "sample_mean", "s_pair")
    return True


def _event_values(stats: dict, statistic: str, col: int):
    if statistic == "w_pair":
        return stats["quad_mean"][:, col], stats["lag1_cov"][:, col]
    if statistic == "s_pair":
        return stats["mean"][:, col], stats["quad_mean"][:, col]
    key = "mean" if statistic == "sample_mean" else statistic
    return stats[key][:, col]


def count_events(
    params: ProcessParams,
    event: EventSpec,
    n_grid,
    replicates: int,
    seed: int,
    start: int = 0,
    chunk: int = 50_000,
) -> np.ndarray:
    """Event counts for each ``n`` over replicates ``start .. start+replicates-1``.

    Replicate ``r`` simulates one path of length ``max(n_grid)`` from
    ``derive_seed(seed, r)``; its prefixes serve every ``n``.  Counts are sums
    over independent replicates, so chunking and ordering do not matter.
    """
    if not _supports(params, event.statistic):
        raise UnsupportedEventError(f"{event.statistic} is not available for {type(params).__name__}")
    n_grid = np.asarray(n_grid, dtype=int)
    n_max = int(n_grid.max())
    counts = np.zeros(len(n_grid), dtype=np.int64)
    for lo in range(start, start + replicates, chunk):
        hi = min(lo + chunk, start + replicates)
        seeds = seeding.replicate_seeds(seed, lo, hi)
        x = paths(params, n_max, seeds)
        stats = prefix_statistics(x, n_grid)
        for j in range(len(n_grid)):
            hit = event.contains(_event_values(stats, event.statistic, j))
            counts[j] += int(np.count_nonzero(hit))
    return counts


def fit_decay(n_grid, counts, replicates: int):
    """Least-squares fit of ``log p = a - slope * n``.

    The standard error propagates the binomial delta-method variance
    ``(1 - p) / (R p)`` of each ``log p`` through the OLS weights, treating
    cells as independent.
    """
    n = np.asarray(n_grid, dtype=float)
    p = np.asarray(counts, dtype=float) / replicates
    logp = np.log(p)
    centred = n - n.mean()
    sxx = float(centred @ centred)
    weights = centred / sxx
    slope = -float(weights @ logp)
    intercept = float(logp.mean() + slope * n.mean())
    var = (1.0 - p) / (replicates * p)
    stderr = float(math.sqrt(weights**2 @ var))
    return slope, stderr, intercept


def estimate_rate(
    params: ProcessParams,
    event: EventSpec,
    n_grid,
    replicates: int,
    seed: int = 0,
    min_count: int = 10,
    chunk: int = 50_000,
) -> RateEstimate:
    """Empirical decay rate ``-(1/n) log P(statistic in event)``.

    Cells whose count falls below ``min_count`` (default: the 10/replicates
    probability guard) are dropped and listed in ``dropped``; fewer than three
    surviving cells is an error.
    """
    n_grid = [int(v) for v in n_grid]
    if len(n_grid) < 3 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be strictly increasing with at least 3 entries")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    counts = count_events(params, event, n_grid, replicates, seed, chunk=chunk)
    keep = [i for i, c in enumerate(counts) if c >= max(min_count, 1)]
    dropped = [n_grid[i] for i in range(len(n_grid)) if i not in keep]
    if dropped:
        log.warning("dropping cells with fewer than %d hits: %s", min_count, dropped)
    if len(keep) < 3:
        raise EstimationError(
            f"only {len(keep)} cells have >= {min_count} hits; need at least 3 (dropped {dropped})"
        )
    kept_n = [n_grid[i] for i in keep]
    kept_c = counts[keep]
    slope, stderr, intercept = fit_decay(kept_n, kept_c, replicates)
    return RateEstimate(
        n_grid=kept_n,
        log_prob=[float(math.log(c / replicates)) for c in kept_c],
        slope=slope,
        stderr=stderr,
        replicates=replicates,
        seed=int(seed),
        counts=[int(c) for c in counts],
        dropped=dropped,
        intercept=intercept,
    )


# --------------------------------------------------------------------------
# theoretical side


def _lln_point(params: ProcessParams, statistic: str):
    if statistic == "quad_mean":
        return params.variance
    if statistic == "lag1_cov":
        return params.lag1_covariance
    if statistic == "yule_walker":
        return params.theta
    if statistic == "sample_mean":
        return 0.0
    if statistic == "w_pair":
        return (params.variance, params.lag1_covariance)
    return (0.0, params.variance)


def rate_function(params: ProcessParams, statistic: str):
    """The closed-form rate of ``statistic`` under ``params`` as a callable."""
    if not _supports(params, statistic):
        raise UnsupportedEventError(f"{statistic} is not available for {type(params).__name__}")
    if isinstance(params, Ar1Params):
        t = params.theta
        table = {
            "quad_mean": lambda c: rates.rate_i1(c, t),
            "lag1_cov": lambda c: rates.rate_i2(c, t),
            "yule_walker": lambda c: rates.rate_yule_walker(c, t),
            "sample_mean": lambda c: rates.rate_sample_mean_ar1(c, t),
            "w_pair": lambda x, y: rates.rate_j(x, y, t),
            "s_pair": lambda x, y: rates.rate_js(x, y, t),
        }
    else:
        f = params.phi
        table = {
            "quad_mean": lambda c: rates.rate_k_phi(c, f),
            "sample_mean": lambda c: rates.rate_sample_mean_ma1(c, f),
            "s_pair": lambda x, y: rates.rate_ks(x, y, f),
        }
    return table[statistic]


def _check_monotone(rate, start: float, stop: float, points: int = 64) -> None:
    """Rates are convex with zero at the LLN point, so they must increase away from it."""
    vals = [rate(t) for t in np.linspace(start, stop, points)]
    prev = -INF
    for v in vals:
        if v < prev - 1e-12:
            raise ArithmeticError("rate is not monotone on the tail; cannot use the boundary value")
        prev = v


def theoretical_event_rate(params: ProcessParams, event: EventSpec) -> float:
    """``inf`` of the matching rate function over the event set."""
    rate = rate_function(params, event.statistic)
    mean = _lln_point(params, event.statistic)
    if event.statistic in ("w_pair", "s_pair"):
        (cx, cy), radius = event.level
        if math.hypot(mean[0] - cx, mean[1] - cy) <= radius:
            return 0.0
        # convex rate, minimiser outside the disc: the infimum is on the circle
        rep = legendre.contraction_inf_1d(
            rate,
            lambda t: (cx + radius * math.cos(t), cy + radius * math.sin(t)),
            (0.0, 2.0 * math.pi),
            grid=721,
        )
        return rep.value
    if event.kind == "ball":
        center, radius = event.level
        lo, hi = center - radius, center + radius
    elif event.kind == "tail_ge":
        lo, hi = event.level, INF
    else:
        lo, hi = -INF, event.level
    if lo <= mean <= hi:
        return 0.0
    edge = lo if mean < lo else hi
    _check_monotone(rate, mean, edge)
    return rate(edge)
