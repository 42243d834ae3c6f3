"""Closed-form rate functions for AR(1) and MA(1) statistics.

Every function returns ``math.inf`` outside its finite domain (strict
inequalities; boundary points are infinite) and never ``nan``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import cgf
from .toeplitz import LambdaPair

INF = math.inf
I2_CUTOFF_CONSTANT = (11.0 + 5.0 * math.sqrt(5.0)) / 2.0


class RateDomainError(ValueError):
    """Raised when a minimiser is requested where the rate is infinite."""


# --------------------------------------------------------------------------
# AR(1): the pair (quadratic mean, lag-1 autocovariance)


def rate_j(x: float, y: float, theta: float) -> float:
    if not (x > 0 and abs(y) < x):
        return INF
    # nonnegative in exact arithmetic; clip rounding residue near the zero
    return max(0.5 * (x * (1.0 + theta * theta) - 1.0 - 2.0 * y * theta + math.log(x / ((x - y) * (x + y)))), 0.0)


def optimal_lambda_j(x: float, y: float, theta: float) -> LambdaPair:
    """Stationary point of ``x l1 + y l2 - L(l1, l2)``."""
    if not (x > 0 and abs(y) < x):
        raise RateDomainError(f"J is infinite at ({x}, {y})")
    det = (x - y) * (x + y)
    return LambdaPair(
        (1.0 + theta * theta) / 2.0 - (x * x + y * y) / (2.0 * x * det),
        y / det - theta,
    )


# quadratic mean


def _sqrt_term(c: float, theta: float) -> float:
    return math.sqrt(1.0 + 4.0 * theta * theta * c * c)


def rate_i1(c: float, theta: float) -> float:
    """Rate of the AR(1) quadratic mean."""
    if not c > 0:
        return INF
    r = _sqrt_term(c, theta)
    return max(0.5 * (c * (1.0 + theta * theta) - r - math.log(2.0 * c / (1.0 + r))), 0.0)


def i1_minimizer_y(c: float, theta: float) -> float:
    if not c > 0:
        raise RateDomainError("I1 is infinite for c <= 0")
    if theta == 0.0:
        return 0.0
    # (-1 + sqrt(1 + 4 c^2 theta^2)) / (2 theta) without cancellation
    return 2.0 * c * c * theta / (1.0 + _sqrt_term(c, theta))


# lag-1 autocovariance


def i2_cutoff(theta: float) -> float:
    """``|c|`` beyond which the closed form for I2 is declared infinite."""
    return math.sqrt(I2_CUTOFF_CONSTANT) / (1.0 + theta * theta)


def a2(c: float, theta: float) -> float:
    """The real cube root ``A(c, theta)`` entering the I2 minimiser."""
    b = c * c * (1.0 + theta * theta) ** 2
    inner = -b * (b * b - 11.0 * b - 1.0)
    if inner < 0:
        raise RateDomainError(f"A(c, theta) is not real for c={c}, theta={theta}")
    return (1.0 + 18.0 * b + 3.0 * math.sqrt(3.0) * math.sqrt(inner)) ** (1.0 / 3.0)


def i2_minimizer_x(c: float, theta: float) -> float:
    if not c * c < I2_CUTOFF_CONSTANT / (1.0 + theta * theta) ** 2:
        raise RateDomainError("outside the range of the closed-form I2 minimiser")
    s = 1.0 + theta * theta
    a = a2(c, theta)
    return (1.0 + 3.0 * c * c * s * s + a + a * a) / (3.0 * s * a)


def rate_i2(c: float, theta: float) -> float:
    """Rate of the lag-1 autocovariance, evaluated as ``J(x_c, c)``."""
    if not c * c < I2_CUTOFF_CONSTANT / (1.0 + theta * theta) ** 2:
        return INF
    return rate_j(i2_minimizer_x(c, theta), c, theta)


# Yule-Walker estimator


def rate_yule_walker(c: float, theta: float) -> float:
    if not abs(c) < 1:
        return INF
    return max(0.5 * math.log((1.0 + theta * theta - 2.0 * theta * c) / ((1.0 - c) * (1.0 + c))), 0.0)


def yw_minimizer_x(c: float, theta: float) -> float:
    if not abs(c) < 1:
        raise RateDomainError("Yule-Walker rate is infinite for |c| >= 1")
    return 1.0 / (1.0 - 2.0 * c * theta + theta * theta)


# --------------------------------------------------------------------------
# AR(1): the pair (sample mean, quadratic mean)


def rate_js(x: float, y: float, theta: float) -> float:
    v = y - x * x
    if not v > 0:
        return INF
    r = _sqrt_term(v, theta)
    return max(0.5 * (
        y * (1.0 + theta * theta) - 2.0 * x * x * theta - r - math.log(2.0 * v / (1.0 + r))
    ), 0.0)


def rate_sample_mean_ar1(c: float, theta: float) -> float:
    return c * c * (1.0 - theta) ** 2 / 2.0


def sample_mean_minimizer_y(c: float, theta: float) -> float:
    return (1.0 + c * c * (1.0 - theta * theta)) / (1.0 - theta * theta)


# --------------------------------------------------------------------------
# MA(1): quadratic mean and the pair (sample mean, quadratic mean)


def lambda_phi_cubic(x: float, phi: float) -> tuple[float, float, float, float]:
    """Coefficients (cubic first) of the stationarity polynomial in lambda."""
    f2 = phi * phi
    g = (f2 - 1.0) ** 2
    return (
        4.0 * x * x * g,
        -4.0 * x * x * (f2 + 1.0) + 4.0 * x * g,
        x * x - 4.0 * x * (f2 + 1.0) + g,
        x - f2 - 1.0,
    )


def _real_cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """Real roots of a cubic: trigonometric form for three roots, Cardano for one.

    In the Cardano case the real part of the complex pair is returned too, so
    callers must filter candidates (by admissibility and objective value).
    """
    a, b, c = c2 / c3, c1 / c3, c0 / c3
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc < 0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * q / (p * m)))
        phase = math.acos(arg) / 3.0
        roots = [m * math.cos(phase - 2.0 * math.pi * k / 3.0) - shift for k in range(3)]
    else:
        root = math.sqrt(disc)
        t = float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))
        # the complex pair has real part -t/2; near a double root (disc ~ 0)
        # it is a real root up to rounding, so keep it as a candidate
        roots = [t - shift, -t / 2.0 - shift]
    polished = []
    for t in roots:
        for _ in range(3):
            f = ((c3 * t + c2) * t + c1) * t + c0
            df = (3.0 * c3 * t + 2.0 * c2) * t + c1
            if df == 0.0:
                break
            t -= f / df
        polished.append(t)
    return polished


def _ma1_objective(lam: float, x: float, phi: float) -> float:
    return x * lam - cgf.l_limit_ma1_qm(lam, phi)


def lambda_phi(x: float, phi: float) -> float:
    """Maximiser of ``x lambda - L(lambda)`` for the MA(1) quadratic mean.

    Picked among the real roots of the stationarity cubic as the admissible
    root (``lambda < 1/(2 (1+|phi|)^2)``) with the largest objective.
    """
    if not x > 0:
        raise RateDomainError("K_phi is infinite for x <= 0")
    bound = cgf.ma1_threshold(phi)
    best = None
    # solve for mu = x * lambda: the lambda-cubic has coefficients of order
    # x^2, x, 1 and overflows/underflows when normalised for tiny x
    f2 = phi * phi
    g = (f2 - 1.0) ** 2
    mu_cubic = (4.0 * g, 4.0 * g - 4.0 * x * (f2 + 1.0), x * x - 4.0 * x * (f2 + 1.0) + g, x * (x - f2 - 1.0))
    for mu in _real_cubic_roots(*mu_cubic):
        lam = mu / x
        if lam < bound:
            val = _ma1_objective(lam, x, phi)
            if best is None or val > best[1]:
                best = (lam, val)
    if best is None:
        raise ArithmeticError(f"no admissible cubic root for x={x}, phi={phi}")
    return best[0]


def lambda_phi_complex(x: float, phi: float) -> complex:
    """Cube-root display of the maximiser, evaluated in complex arithmetic.

    Kept as a cross-check on ``lambda_phi``; the imaginary part should vanish.
    """
    f2 = phi * phi
    g = f2 - 1.0
    a_term = 4.0 * x * (x * (f2 + 1.0) - g * g)
    b_term = 4.0 * x * x * (x * x * (phi**4 + 14.0 * f2 + 1.0) + 4.0 * x * (f2 + 1.0) * g * g + g**4)
    small_c = -(x**8) * g**4 * (
        4.0 * x**4 * f2
        + 32.0 * x**3 * (phi**4 + f2)
        + x * x * (phi**4 + 46.0 * f2 + 1.0) * g * g
        + 6.0 * x * (f2 + 1.0) * g**4
        + g**6
    )
    radicand = (
        -(x**6) * (phi**6 - 33.0 * phi**4 - 33.0 * f2 + 1.0)
        - 6.0 * x**5 * g * g * (phi**4 - 10.0 * f2 + 1.0)
        + 6.0 * x**4 * g**4 * (f2 + 1.0)
        + x**3 * g**6
        + 3.0 * math.sqrt(3.0) * cmath.sqrt(small_c)
    )
    c_term = -(1.0 + 1j * math.sqrt(3.0)) * radicand ** (1.0 / 3.0)
    f = a_term + b_term / c_term + c_term
    return f / (12.0 * x * x * g * g)


def rate_k_phi(x: float, phi: float) -> float:
    """Rate of the MA(1) quadratic mean."""
    if not x > 0:
        return INF
    lam = lambda_phi(x, phi)
    return max(_ma1_objective(lam, x, phi), 0.0)


def rate_ks(x: float, y: float, phi: float) -> float:
    v = y - x * x
    if not v > 0:
        return INF
    return rate_k_phi(v, phi) + x * x / (2.0 * (1.0 + phi) ** 2)


def rate_sample_mean_ma1(c: float, phi: float) -> float:
    return c * c / (2.0 * (1.0 + phi) ** 2)


RATES_1D = {
    "I1": rate_i1,
    "I2": rate_i2,
    "Itheta": rate_yule_walker,
    "IXbar": rate_sample_mean_ar1,
    "Kphi": rate_k_phi,
    "IYbar": rate_sample_mean_ma1,
}
RATES_2D = {"J": rate_j, "JS": rate_js, "KS": rate_ks}
MA1_RATES = {"Kphi", "KS", "IYbar"}


def vectorize(rate):
    """Elementwise numpy wrapper around a scalar rate."""
    return np.vectorize(rate, otypes=[float])
