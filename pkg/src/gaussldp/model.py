"""Stationary Gaussian AR(1) / MA(1) simulation and sample statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from . import seeding


class DegenerateInputError(ValueError):
    """Raised when a statistic is undefined for the given sample."""


@dataclass(frozen=True)
class Ar1Params:
    theta: float

    def __post_init__(self):
        if not abs(self.theta) < 1.0:
            raise ValueError(f"AR(1) coefficient must satisfy |theta| < 1, got {self.theta}")

    @property
    def variance(self) -> float:
        return 1.0 / (1.0 - self.theta**2)

    @property
    def lag1_covariance(self) -> float:
        return self.theta / (1.0 - self.theta**2)


@dataclass(frozen=True)
class Ma1Params:
    phi: float

    def __post_init__(self):
        if not abs(self.phi) < 1.0:
            raise ValueError(f"MA(1) coefficient must satisfy |phi| < 1, got {self.phi}")

    @property
    def variance(self) -> float:
        return 1.0 + self.phi**2

    @property
    def lag1_covariance(self) -> float:
        return self.phi


ProcessParams = Union[Ar1Params, Ma1Params]


@dataclass(frozen=True)
class SamplePath:
    values: np.ndarray = field(repr=False)
    seed: int
    n: int

    def __post_init__(self):
        if len(self.values) != self.n:
            raise ValueError("len(values) must equal n")


class BivariateStat(NamedTuple):
    first: float
    second: float


def _check_n(n: int, minimum: int = 1) -> None:
    if int(n) != n or n < minimum:
        raise ValueError(f"n must be an integer >= {minimum}, got {n}")


def ar1_paths(params: Ar1Params, n: int, seeds) -> np.ndarray:
    """Stationary AR(1) paths, one row per seed.

    ``X_1 ~ N(0, 1/(1-theta^2))`` is drawn exactly from the first variate of
    each stream; innovations are the following ``n - 1`` variates.
    """
    _check_n(n)
    z = seeding.normals(seeds, n)
    theta = params.theta
    x = np.empty_like(z)
    x[:, 0] = z[:, 0] / np.sqrt(1.0 - theta * theta)
    for k in range(1, n):
        x[:, k] = theta * x[:, k - 1] + z[:, k]
    return x


def ma1_paths(params: Ma1Params, n: int, seeds) -> np.ndarray:
    """MA(1) paths ``Y_k = e_k + phi e_{k-1}``; ``e_0`` is the first variate."""
    _check_n(n)
    e = seeding.normals(seeds, n + 1)
    return e[:, 1:] + params.phi * e[:, :-1]


def simulate_ar1(params: Ar1Params, n: int, seed: int) -> SamplePath:
    values = ar1_paths(params, n, [seed])[0]
    return SamplePath(values, int(seed), n)


def simulate_ma1(params: Ma1Params, n: int, seed: int) -> SamplePath:
    values = ma1_paths(params, n, [seed])[0]
    return SamplePath(values, int(seed), n)


def simulate(params: ProcessParams, n: int, seed: int) -> SamplePath:
    if isinstance(params, Ar1Params):
        return simulate_ar1(params, n, seed)
    return simulate_ma1(params, n, seed)


def paths(params: ProcessParams, n: int, seeds) -> np.ndarray:
    if isinstance(params, Ar1Params):
        return ar1_paths(params, n, seeds)
    return ma1_paths(params, n, seeds)


def _values(path) -> np.ndarray:
    if isinstance(path, SamplePath):
        return np.asarray(path.values, dtype=float)
    return np.asarray(path, dtype=float)


def stat_w(path) -> BivariateStat:
    """Quadratic mean and lag-1 empirical autocovariance, both divided by n."""
    x = _values(path)
    n = len(x)
    if n < 2:
        raise ValueError("W_n needs n >= 2")
    return BivariateStat(float(x @ x) / n, float(x[1:] @ x[:-1]) / n)


def stat_s(path) -> BivariateStat:
    """Sample mean and quadratic mean."""
    x = _values(path)
    n = len(x)
    if n < 1:
        raise ValueError("S_n needs n >= 1")
    return BivariateStat(float(x.sum()) / n, float(x @ x) / n)


def yule_walker(path) -> float:
    x = _values(path)
    if len(x) < 2:
        raise ValueError("Yule-Walker estimator needs n >= 2")
    denom = float(x @ x)
    if denom == 0.0:
        raise DegenerateInputError("Yule-Walker estimator undefined for an all-zero path")
    return float(x[1:] @ x[:-1]) / denom


def prefix_statistics(x: np.ndarray, n_values) -> dict[str, np.ndarray]:
    """Sample statistics of every row of ``x`` truncated at each ``n``.

    Returns arrays of shape ``(rows, len(n_values))`` keyed by ``mean``,
    ``quad_mean``, ``lag1_cov`` and ``yule_walker``.  Prefixes of a stream are
    themselves valid paths, so one simulation of the longest length serves
    every ``n``.
    """
    n_values = np.asarray(n_values, dtype=int)
    cols = n_values - 1
    s1 = np.cumsum(x, axis=1)[:, cols]
    s2 = np.cumsum(x * x, axis=1)[:, cols]
    lag = np.concatenate([np.zeros((x.shape[0], 1)), np.cumsum(x[:, 1:] * x[:, :-1], axis=1)], axis=1)
    s11 = lag[:, cols]
    with np.errstate(invalid="ignore", divide="ignore"):
        yw = np.where(s2 > 0, s11 / np.where(s2 > 0, s2, 1.0), np.nan)
    return {
        "mean": s1 / n_values,
        "quad_mean": s2 / n_values,
        "lag1_cov": s11 / n_values,
        "yule_walker": yw,
    }
