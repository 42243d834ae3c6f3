"""Numerical oracles: bounded-domain Legendre transform and 1-D infima.

These are deliberately generic (black-box evaluators, no closed forms) so
that they can validate the formulas in :mod:`gaussldp.rates`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

INF = math.inf
GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OptimizationReport:
    argopt: tuple
    value: float
    iterations: int
    converged: bool
    residual: float
    boundary_limit: bool = False


def _fd_gradient(f, lam, h):
    g = np.empty(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        g[i] = (f(lam + e) - f(lam - e)) / (2.0 * h)
    return g


def _ascend(objective, gradient, start, tol, max_iter, unbounded_norm):
    """Damped Newton ascent of a concave objective that is -inf off-domain."""
    lam = np.array(start, dtype=float)
    val = objective(lam)
    h = 1e-6
    it = 0
    grad = gradient(lam)
    for it in range(1, max_iter + 1):
        gnorm = float(np.linalg.norm(grad))
        if not math.isfinite(gnorm):
            break
        if gnorm < tol:
            return lam, val, it, True, gnorm, False
        hess = np.empty((2, 2))
        for i in range(2):
            e = np.zeros(2)
            e[i] = h * max(1.0, abs(lam[i]))
            gp, gm = gradient(lam + e), gradient(lam - e)
            if not (np.all(np.isfinite(gp)) and np.all(np.isfinite(gm))):
                hess = None
                break
            hess[:, i] = (gp - gm) / (2.0 * e[i])
        direction = None
        if hess is not None:
            hess = (hess + hess.T) / 2.0
            if np.all(np.linalg.eigvalsh(hess) < 0):
                direction = -np.linalg.solve(hess, grad)
        newton = direction is not None
        if not newton:
            direction = grad / max(gnorm, 1e-300)
        step = 1.0
        moved = False
        while step > 1e-16:
            trial = lam + step * direction
            tval = objective(trial)
            if math.isfinite(tval) and tval >= val - 1e-15 * max(1.0, abs(val)):
                moved = True
                break
            step /= 2.0
        if moved and not newton and step == 1.0:
            # gradient steps on flat or linear pieces: expand while improving
            for _ in range(64):
                wider = lam + 2.0 * step * direction
                wval = objective(wider)
                if not (math.isfinite(wval) and wval > tval):
                    break
                step, trial, tval = 2.0 * step, wider, wval
        if not moved:
            return lam, val, it, False, gnorm, True
        if np.linalg.norm(trial - lam) < 1e-15 * max(1.0, np.linalg.norm(lam)):
            lam, val = trial, tval
            grad = gradient(lam)
            gnorm = float(np.linalg.norm(grad))
            return lam, val, it, gnorm < tol, gnorm, gnorm >= tol
        lam, val = trial, tval
        grad = gradient(lam)
        if np.linalg.norm(lam) > unbounded_norm:
            return lam, INF, it, True, float(np.linalg.norm(grad)), True
    return lam, val, it, False, float(np.linalg.norm(grad)), False


def fenchel_legendre_2d(
    evaluator: Callable,
    domain: Callable,
    x: float,
    y: float,
    tol: float = 1e-9,
    box=((-2.0, 0.5), (-2.0, 2.0)),
    gradient: Optional[Callable] = None,
    max_iter: int = 10_000,
    unbounded_norm: float = 1e8,
) -> OptimizationReport:
    """``sup { x l1 + y l2 - L(l) : l in domain }`` by multi-start ascent.

    Starts are the origin plus the points of a 5x5 interior grid of ``box``
    that lie in the domain.  ``gradient`` (of ``L``) is optional; central
    differences are used otherwise.  A supremum that escapes to infinity is
    reported as ``inf`` with ``boundary_limit`` set.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    target = np.array([x, y], dtype=float)

    def objective(lam):
        if not domain(lam):
            return -INF
        v = evaluator(lam)
        if not math.isfinite(v):
            return -INF
        return float(target @ lam - v)

    if gradient is None:
        def obj_grad(lam):
            return _fd_gradient(objective, lam, 1e-6)
    else:
        def obj_grad(lam):
            if not domain(lam):
                return np.full(2, np.nan)
            return target - np.asarray(gradient(lam), dtype=float)

    (lo1, hi1), (lo2, hi2) = box
    starts = [np.zeros(2)]
    for a in np.linspace(lo1, hi1, 7)[1:-1]:
        for b in np.linspace(lo2, hi2, 7)[1:-1]:
            starts.append(np.array([a, b]))
    starts = [s for s in starts if math.isfinite(objective(s))]

    best = None
    total_iter = 0
    for s in starts:
        lam, val, it, conv, res, bnd = _ascend(objective, obj_grad, s, tol, max_iter, unbounded_norm)
        total_iter += it
        report = OptimizationReport(tuple(float(v) for v in lam), float(val), it, conv, res, bnd)
        if best is None or report.value > best.value or (
            report.value == best.value and report.converged and not best.converged
        ):
            best = report
    if best is None:
        return OptimizationReport((math.nan, math.nan), -INF, 0, False, INF)
    best.iterations = total_iter
    return best


def _golden_section(f, a, b, tol, max_iter):
    c = b - GOLDEN_RATIO * (b - a)
    d = a + GOLDEN_RATIO * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while abs(b - a) > tol and it < max_iter:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN_RATIO * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN_RATIO * (b - a)
            fd = f(d)
    t = (a + b) / 2.0
    return t, it, abs(b - a)


def contraction_inf_1d(
    rate2d: Callable,
    constraint: Callable,
    bracket: tuple,
    tol: float = 1e-10,
    grid: int = 401,
    max_iter: int = 10_000,
) -> OptimizationReport:
    """``inf_t rate2d(*constraint(t))`` over ``t`` in ``bracket``.

    A uniform scan locates the best finite cell, then golden-section search
    refines inside the neighbouring cells.  Returns ``inf`` when every scan
    value is infinite.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValueError("bracket must satisfy lo < hi")

    def f(t):
        v = rate2d(*constraint(t))
        return v if not math.isnan(v) else INF

    ts = np.linspace(lo, hi, grid)
    vals = np.array([f(t) for t in ts])
    if not np.any(np.isfinite(vals)):
        return OptimizationReport((float(ts[grid // 2]),), INF, grid, True, 0.0)
    k = int(np.argmin(vals))
    a = ts[max(k - 1, 0)]
    b = ts[min(k + 1, grid - 1)]
    t, it, width = _golden_section(f, a, b, tol, max_iter)
    val = f(t)
    if vals[k] < val:
        t, val = float(ts[k]), float(vals[k])
    return OptimizationReport((float(t),), float(val), grid + it, width <= tol, width)
