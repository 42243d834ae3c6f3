"""Normalized cumulant generating functions of the quadratic statistics.

Values live in ``R U {+inf}``; ``math.inf`` plays the role of the extended
real infinity and no function here returns ``nan``.
"""

from __future__ import annotations

import math

import numpy as np

from . import toeplitz
from .toeplitz import DENSE_CAP

INF = math.inf


def l_n_ar1(lam, theta: float, n: int, dense_cap: int = DENSE_CAP) -> float:
    """Finite-n CGF of ``W_n`` from the eigenvalues of ``T_n(phi) T_n(g)``."""
    alpha = toeplitz.product_eigenvalues(lam, theta, n, dense_cap=dense_cap)
    if alpha[-1] >= 0.5:
        return INF
    if lam[0] == 0 and lam[1] == 0:
        return 0.0
    return float(-np.sum(np.log1p(-2.0 * alpha)) / (2.0 * n)) + 0.0


def l_n_ar1_pivot(lam, theta: float, n: int):
    """Same quantity in O(n) via ``log det D_{n,lambda}``.

    ``det(I - 2 T(phi) T(g)) = det(D) det(T(g))`` and ``det T_n(g) = 1/(1-theta^2)``.
    Accepts array-valued ``lam`` components (broadcast); returns a float for
    scalar input.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    lam1 = np.asarray(lam[0], float)
    lam2 = np.asarray(lam[1], float)
    pd, logdet = toeplitz.pivot_log_det(
        1.0 - 2.0 * lam1, 1.0 + theta * theta - 2.0 * lam1, -theta - lam2, n
    )
    out = np.where(pd, -(np.where(pd, logdet, 0.0) - math.log1p(-theta * theta)) / (2.0 * n), INF)
    # L_n(0) = 0 exactly; avoid reporting rounding residue there
    out = np.where((lam1 == 0) & (lam2 == 0), 0.0, out) + 0.0
    if out.ndim == 0:
        return float(out)
    return out


def _closed_form(p: float, q: float) -> float:
    # p + sqrt(p^2 - 4 q^2) written to avoid overflow of p^2 (p > 0 here)
    r = 2.0 * q / p
    root = p * math.sqrt(max((1.0 - r) * (1.0 + r), 0.0))
    return -0.5 * math.log((p + root) / 2.0) + 0.0


def l_limit_ar1(lam, theta: float) -> float:
    """Limit of ``L_n`` on the domain D; ``inf`` outside it."""
    if not toeplitz.in_domain(lam, theta):
        return INF
    if lam[0] == 0 and lam[1] == 0:
        return 0.0
    return _closed_form(1.0 + theta * theta - 2.0 * lam[0], theta + lam[1])


def in_continuation_domain(lam, theta: float) -> bool:
    """Open set where the closed-form limit is real: ``p > 2|theta + lambda2|``."""
    p = 1.0 + theta * theta - 2.0 * lam[0]
    return p > 2.0 * abs(theta + lam[1])


def l_continuation_ar1(lam, theta: float) -> float:
    """The closed-form limit evaluated wherever it is real.

    This set contains D and the effective domain {lambda1 < 1/2, ...}; it is
    the function whose Legendre transform has the stationary point used for
    the W_n rate.
    """
    if not in_continuation_domain(lam, theta):
        return INF
    return _closed_form(1.0 + theta * theta - 2.0 * lam[0], theta + lam[1])


def grad_l_continuation_ar1(lam, theta: float) -> np.ndarray:
    p = 1.0 + theta * theta - 2.0 * lam[0]
    s = theta + lam[1]
    root = math.sqrt(p * p - 4.0 * s * s)
    return np.array([1.0 / root, 2.0 * s / (root * (p + root))])


def ma1_threshold(phi: float) -> float:
    """Supremum of the finite MA(1) CGF domain: ``1 / (2 max h_phi)``."""
    return 1.0 / (2.0 * (1.0 + abs(phi)) ** 2)


def l_limit_ma1_qm(lambda1: float, phi: float) -> float:
    """Limit CGF of the MA(1) quadratic mean."""
    if not lambda1 < ma1_threshold(phi):
        return INF
    a = 1.0 - 2.0 * lambda1 * (1.0 + phi * phi)
    return _closed_form(a, 2.0 * lambda1 * phi)


def dl_limit_ma1_qm(lambda1: float, phi: float) -> float:
    """Derivative of ``l_limit_ma1_qm`` inside its domain."""
    a = 1.0 - 2.0 * lambda1 * (1.0 + phi * phi)
    root = math.sqrt(a * a - 16.0 * lambda1 * lambda1 * phi * phi)
    return (1.0 + phi * phi) / root + 8.0 * lambda1 * phi * phi / (root * (a + root))
