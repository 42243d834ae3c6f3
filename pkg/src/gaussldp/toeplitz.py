"""Tridiagonal precision matrices, Sylvester pivots and the CGF domain.

The O(n) pivot recursion is the production route for determinants and
positive-definiteness checks.  Dense matrices are built only as oracles and
for the eigenvalue route, and are capped at ``DENSE_CAP`` rows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

DENSE_CAP = 1024


class LambdaPair(NamedTuple):
    lambda1: float
    lambda2: float


class OutOfCaseError(ValueError):
    """Raised when the G-map has no pair of distinct real fixed points."""


class DomainRegion(enum.Enum):
    D1 = "D1"
    D2 = "D2"
    OUTSIDE = "Outside"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TriDiag:
    """Symmetric tridiagonal matrix with equal corner entries.

    Diagonal is ``(corner, interior, ..., interior, corner)`` and both
    off-diagonals are ``off``.
    """

    n: int
    corner: float
    interior: float
    off: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("TriDiag needs n >= 2")

    def to_dense(self) -> np.ndarray:
        diag = np.full(self.n, self.interior, dtype=float)
        diag[0] = diag[-1] = self.corner
        off = np.full(self.n - 1, self.off, dtype=float)
        return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def ar1_precision(theta: float, n: int) -> TriDiag:
    """Inverse of the stationary AR(1) covariance matrix."""
    return TriDiag(n, 1.0, 1.0 + theta * theta, -theta)


def d_matrix(lam, theta: float, n: int) -> TriDiag:
    """``T_n^{-1}(g_theta) - 2 T_n(phi_lambda)`` in tridiagonal form."""
    lam1, lam2 = lam
    return TriDiag(n, 1.0 - 2.0 * lam1, 1.0 + theta * theta - 2.0 * lam1, -theta - lam2)


def _raw_pivots(d: TriDiag, stop_at_nonpositive: bool) -> list[float]:
    q2 = d.off * d.off
    out = [d.corner]
    if stop_at_nonpositive and d.corner <= 0:
        return out
    a = d.corner
    for _ in range(2, d.n):
        if a == 0.0:
            return out
        a = d.interior - q2 / a
        out.append(a)
        if stop_at_nonpositive and a <= 0:
            return out
    if a == 0.0:
        return out
    out.append(d.corner - q2 / a)
    return out


def pivots(d: TriDiag) -> np.ma.MaskedArray:
    """LDL^T pivots of ``d`` from the map ``a -> interior - off^2 / a``.

    The first ``n - 1`` pivots are ``corner, G(corner), G^2(corner), ...``; the
    last one is ``corner - off^2 / r_{n-1}`` because the trailing diagonal
    entry is the corner value again.  The recursion stops at the first
    nonpositive pivot; the remaining entries repeat that pivot and are masked.
    """
    got = _raw_pivots(d, stop_at_nonpositive=True)
    values = np.full(d.n, got[-1], dtype=float)
    values[: len(got)] = got
    mask = np.zeros(d.n, dtype=bool)
    mask[len(got):] = True
    return np.ma.MaskedArray(values, mask=mask)


def is_positive_definite(d: TriDiag) -> bool:
    p = pivots(d)
    return not np.ma.is_masked(p) and bool(np.all(p.data > 0))


def determinant(d: TriDiag) -> float:
    """Determinant via the full (non-stopping) pivot recursion."""
    got = _raw_pivots(d, stop_at_nonpositive=False)
    if len(got) < d.n:
        return 0.0
    return float(np.prod(got))


def pivot_log_det(corner, interior, off, n: int):
    """Vectorised positive-definiteness test and log-determinant.

    Arguments broadcast against each other.  Returns ``(pd, logdet)`` where
    ``logdet`` is ``nan`` wherever ``pd`` is false.
    """
    corner, interior, off = np.broadcast_arrays(
        np.asarray(corner, float), np.asarray(interior, float), np.asarray(off, float)
    )
    q2 = off * off
    a = corner.copy()
    pd = a > 0
    logdet = np.where(pd, np.log(np.where(pd, a, 1.0)), 0.0)
    for _ in range(2, n):
        safe = np.where(pd, a, 1.0)
        a = interior - q2 / safe
        pd &= a > 0
        logdet += np.log(np.where(pd, a, 1.0))
    last = corner - q2 / np.where(pd, a, 1.0)
    pd &= last > 0
    logdet += np.log(np.where(pd, last, 1.0))
    return pd, np.where(pd, logdet, np.nan)


def g_map(a: float, p: float, q: float) -> float:
    return p - q * q / a


def g_map_fixed_points(p: float, q: float) -> tuple[float, float]:
    """Repelling and attracting fixed points ``(R, Q)`` of ``a -> p - q^2/a``."""
    disc = p * p - 4.0 * q * q
    if not disc > 0:
        raise OutOfCaseError(f"need p^2 > 4 q^2, got p={p}, q={q}")
    root = math.sqrt(disc)
    return (p - root) / 2.0, (p + root) / 2.0


def domain_membership(lam, theta: float) -> DomainRegion:
    """Classify ``lam`` against the two pieces of the CGF domain."""
    lam1, lam2 = float(lam[0]), float(lam[1])
    s = theta + lam2
    if lam1 <= (1.0 - theta * theta) / 2.0:
        if 4.0 * s * s < (1.0 + theta * theta - 2.0 * lam1) ** 2:
            return DomainRegion.D1
        return DomainRegion.OUTSIDE
    if lam1 < 0.5 and s * s < theta * theta * (1.0 - 2.0 * lam1):
        return DomainRegion.D2
    return DomainRegion.OUTSIDE


def in_domain(lam, theta: float) -> bool:
    return domain_membership(lam, theta) is not DomainRegion.OUTSIDE


def domain_tags(lam1, lam2, theta: float) -> np.ndarray:
    """Vectorised ``domain_membership``: 0 outside, 1 for D1, 2 for D2."""
    lam1, lam2 = np.broadcast_arrays(np.asarray(lam1, float), np.asarray(lam2, float))
    s = theta + lam2
    left = lam1 <= (1.0 - theta * theta) / 2.0
    d1 = left & (4.0 * s * s < (1.0 + theta * theta - 2.0 * lam1) ** 2)
    d2 = ~left & (lam1 < 0.5) & (s * s < theta * theta * (1.0 - 2.0 * lam1))
    return np.where(d1, 1, np.where(d2, 2, 0))


def boundary_margin(lam, theta: float) -> float:
    """Distance from ``lam`` to the nearest curve bounding D1 or D2.

    Uses whole lines/parabola rather than the pieces actually on the
    boundary, so the value is a lower bound on the true distance.
    """
    lam1, lam2 = float(lam[0]), float(lam[1])
    s = theta + lam2
    half = (1.0 + theta * theta) / 2.0
    dists = [
        abs(lam1 - (1.0 - theta * theta) / 2.0),
        abs(lam1 - 0.5),
        abs(s + lam1 - half) / math.sqrt(2.0),
        abs(-s + lam1 - half) / math.sqrt(2.0),
    ]
    if theta != 0.0:
        # parabola lam1 = (1 - u^2/theta^2)/2, lam2 = u - theta; stationarity
        # of the squared distance is a depressed cubic in u
        k = 1.0 / (theta * theta)
        roots = np.roots([k * k / 2.0, 0.0, 1.0 + lam1 * k - k / 2.0, -s])
        for u in roots[np.abs(roots.imag) < 1e-9].real:
            dists.append(math.hypot((1.0 - k * u * u) / 2.0 - lam1, u - s))
    return min(dists)


def ar1_covariance(theta: float, n: int) -> np.ndarray:
    col = theta ** np.arange(n) / (1.0 - theta * theta)
    return scipy.linalg.toeplitz(col)


def toeplitz_phi(lam, n: int) -> np.ndarray:
    lam1, lam2 = lam
    col = np.zeros(n)
    col[0] = lam1
    if n > 1:
        col[1] = lam2 / 2.0
    return scipy.linalg.toeplitz(col)


def _check_dense(n: int, dense_cap: int) -> None:
    if n > dense_cap:
        raise ValueError(
            f"n={n} exceeds the dense cap {dense_cap}; use the pivot route instead"
        )


def product_eigenvalues(lam, theta: float, n: int, dense_cap: int = DENSE_CAP) -> np.ndarray:
    """Ascending eigenvalues of ``S T_n(phi_lambda) S`` with ``S^2`` the covariance."""
    if n < 2:
        raise ValueError("n must be >= 2")
    _check_dense(n, dense_cap)
    w, v = np.linalg.eigh(ar1_covariance(theta, n))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    sym = root @ toeplitz_phi(lam, n) @ root
    return np.linalg.eigvalsh((sym + sym.T) / 2.0)
