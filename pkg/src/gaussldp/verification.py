"""Verification suites shared by ``gaussldp verify`` and the acceptance tests.

Each check returns a :class:`CheckResult`; suites are lists of checks.  The
defaults are the full-size settings; callers may shrink them for smoke runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import cgf, empirics, legendre, rates, toeplitz
from .model import Ar1Params

INF = math.inf


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return asdict(self)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def interior_grid(theta: float, size: int = 7, shrink: float = 0.9, lam1_min: float = -1.0):
    """``size x size`` curvilinear grid strictly inside D.

    ``lambda1`` runs from ``lam1_min`` to 90% of the way to 1/2; for each
    ``lambda1`` the ``lambda2`` values cover ``shrink`` of the admissible
    interval around ``-theta``.
    """
    top = 0.5 - (1.0 - shrink) * (0.5 - lam1_min)
    pts = []
    for l1 in np.linspace(lam1_min, top, size):
        if l1 <= (1.0 - theta * theta) / 2.0:
            half = (1.0 + theta * theta - 2.0 * l1) / 2.0
        else:
            half = abs(theta) * math.sqrt(1.0 - 2.0 * l1)
        for u in np.linspace(-shrink, shrink, size):
            pts.append((float(l1), float(-theta + u * half)))
    return pts


# --------------------------------------------------------------------------
# convergence


@_timed
def check_cgf_convergence(thetas=(0.0, 0.3, -0.3, 0.6, -0.6, 0.9), tol=0.02, n_mid=512,
                          n_small=128, n_large=1024) -> CheckResult:
    """Finite-n CGF approaches the closed-form limit on a 7x7 grid inside D."""
    worst = 0.0
    monotone_fail = []
    for theta in thetas:
        pts = interior_grid(theta)
        l1 = np.array([p[0] for p in pts])
        l2 = np.array([p[1] for p in pts])
        limit = np.array([cgf.l_limit_ar1(p, theta) for p in pts])
        mid = np.array([cgf.l_n_ar1(p, theta, n_mid) for p in pts])
        small = cgf.l_n_ar1_pivot((l1, l2), theta, n_small)
        large = cgf.l_n_ar1_pivot((l1, l2), theta, n_large)
        err = np.abs(mid - limit)
        worst = max(worst, float(np.max(err)))
        bad = np.abs(large - limit) > np.abs(small - limit) + 1e-12
        monotone_fail += [(theta, pts[i]) for i in np.flatnonzero(bad)]
    ok = worst <= tol and not monotone_fail
    return CheckResult(
        "C1 CGF convergence",
        ok,
        f"max |L_{n_mid} - L| = {worst:.3e} (tol {tol}); n={n_large} error > n={n_small} error at "
        f"{len(monotone_fail)} points",
        {"max_error": worst, "monotone_failures": len(monotone_fail)},
    )


def random_domain_points(count: int, rng: np.random.Generator, n_max: int = 512):
    out = []
    while len(out) < count:
        theta = float(rng.uniform(-0.95, 0.95))
        lam = (float(rng.uniform(-2.0, 0.5)), float(rng.uniform(-3.0, 3.0)))
        if toeplitz.in_domain(lam, theta):
            out.append((lam, theta, int(rng.integers(2, n_max + 1))))
    return out


@_timed
def check_route_equivalence(count=200, tol=1e-10, seed=20240601) -> CheckResult:
    """Eigenvalue route and pivot route give the same finite-n CGF."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    mismatched_inf = 0
    for lam, theta, n in random_domain_points(count, rng):
        a = cgf.l_n_ar1(lam, theta, n)
        b = cgf.l_n_ar1_pivot(lam, theta, n)
        if math.isinf(a) or math.isinf(b):
            mismatched_inf += int(a != b)
            continue
        worst = max(worst, abs(a - b))
    ok = worst <= tol and mismatched_inf == 0
    return CheckResult(
        "C2 route equivalence",
        ok,
        f"max |eig - pivot| = {worst:.3e} over {count} cases (tol {tol}); inf mismatches {mismatched_inf}",
        {"max_error": worst, "inf_mismatches": mismatched_inf},
    )


# --------------------------------------------------------------------------
# closed forms


def admissible_grid(size: int = 20, x_max: float = 3.0):
    xs = x_max * np.arange(1, size + 1) / size
    fr = -1.0 + (2.0 * np.arange(size) + 1.0) / size
    return [(float(x), float(x * f)) for x in xs for f in fr]


def legendre_transform_of_limit(x: float, y: float, theta: float, tol: float = 1e-9,
                                restrict_to_domain: bool = False):
    if restrict_to_domain:
        return legendre.fenchel_legendre_2d(
            lambda lam: cgf.l_limit_ar1(lam, theta),
            lambda lam: toeplitz.in_domain(lam, theta),
            x, y, tol=tol,
        )
    return legendre.fenchel_legendre_2d(
        lambda lam: cgf.l_continuation_ar1(lam, theta),
        lambda lam: cgf.in_continuation_domain(lam, theta),
        x, y, tol=tol,
        gradient=lambda lam: cgf.grad_l_continuation_ar1(lam, theta),
    )


@_timed
def check_legendre_duality(thetas=(0.0, 0.3, 0.6), tol=1e-6, size=20) -> CheckResult:
    """Numerical Legendre transform of the CGF limit equals J on an admissible grid."""
    worst = 0.0
    unconverged = 0
    restricted_gap = 0
    for theta in thetas:
        for x, y in admissible_grid(size):
            rep = legendre_transform_of_limit(x, y, theta)
            unconverged += int(not rep.converged)
            worst = max(worst, abs(rep.value - rates.rate_j(x, y, theta)))
            lam = rates.optimal_lambda_j(x, y, theta)
            restricted_gap += int(not toeplitz.in_domain(lam, theta))
    ok = worst <= tol and unconverged == 0
    return CheckResult(
        "C3 Legendre duality",
        ok,
        f"max |sup - J| = {worst:.3e} (tol {tol}) on {size}x{size} grid x {len(thetas)} thetas; "
        f"unconverged {unconverged}; optimiser outside D at {restricted_gap} points",
        {"max_error": worst, "unconverged": unconverged, "optimizer_outside_D": restricted_gap},
    )


def _contract_i1(c, theta):
    return legendre.contraction_inf_1d(lambda x, y: rates.rate_j(x, y, theta), lambda t: (c, t), (-abs(c), abs(c)) if c > 0 else (-1.0, 1.0))


def _contract_i2(c, theta):
    return legendre.contraction_inf_1d(lambda x, y: rates.rate_j(x, y, theta), lambda t: (t, c), (abs(c), abs(c) + 25.0))


def _contract_itheta(c, theta):
    return legendre.contraction_inf_1d(lambda x, y: rates.rate_j(x, y, theta), lambda t: (t, c * t), (0.0, 60.0))


def _agree(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


@_timed
def check_contraction_finite(thetas=(0.0, 0.3, -0.3, 0.6, 0.9), tol=1e-8, points=25) -> CheckResult:
    """Infima of J along x=c, y=c and y=cx match I1, I2, Itheta inside their finite domains,
    and Itheta / I1 are infinite where no admissible point exists."""
    worst = {"I1": 0.0, "I2": 0.0, "Itheta": 0.0}
    inf_fail = []
    for theta in thetas:
        for c in np.linspace(0.4, 10.0, points):
            worst["I1"] = max(worst["I1"], abs(_contract_i1(c, theta).value - rates.rate_i1(c, theta)))
        cut = rates.i2_cutoff(theta)
        for c in np.linspace(-0.98 * cut, 0.98 * cut, points):
            worst["I2"] = max(worst["I2"], abs(_contract_i2(c, theta).value - rates.rate_i2(c, theta)))
        for c in np.linspace(-0.96, 0.96, points):
            worst["Itheta"] = max(worst["Itheta"], abs(_contract_itheta(c, theta).value - rates.rate_yule_walker(c, theta)))
        for c in (1.0, -1.0, 1.5, -3.0):
            if not _agree(_contract_itheta(c, theta).value, rates.rate_yule_walker(c, theta), tol):
                inf_fail.append(("Itheta", theta, c))
        for c in (0.0, -0.5):
            if not _agree(_contract_i1(c, theta).value, rates.rate_i1(c, theta), tol):
                inf_fail.append(("I1", theta, c))
    ok = max(worst.values()) <= tol and not inf_fail
    return CheckResult(
        "C4a contraction consistency (finite domains)",
        ok,
        ", ".join(f"{k} max err {v:.2e}" for k, v in worst.items()) + f" (tol {tol}); +inf mismatches {inf_fail}",
        {**{f"{k}_max_error": v for k, v in worst.items()}, "inf_failures": len(inf_fail)},
    )


@_timed
def check_i2_beyond_cutoff(thetas=(0.0, 0.3, -0.3, 0.6, 0.9)) -> CheckResult:
    """The infimum of J along y=c is +inf beyond the I2 cutoff, as the closed form asserts."""
    finite = []
    for theta in thetas:
        cut = rates.i2_cutoff(theta)
        for c in (1.01 * cut, -1.01 * cut, 1.5 * cut, -2.0 * cut):
            got = _contract_i2(c, theta).value
            if not _agree(got, rates.rate_i2(c, theta), 1e-8):
                finite.append((theta, round(float(c), 4), got))
    return CheckResult(
        "C4b contraction consistency (I2 beyond cutoff)",
        not finite,
        f"{len(finite)} points where inf_x J(x, c) is finite but I2(c) = inf; first: {finite[:2]}",
        {"mismatches": len(finite)},
    )


def lln_cases():
    """``(name, rate(point), lln_point, param)`` for every rate function."""
    cases = []
    for theta in (0.0, 0.3, -0.6, 0.9):
        v = 1.0 / (1.0 - theta * theta)
        cases += [
            ("J", lambda p, t=theta: rates.rate_j(p[0], p[1], t), (v, theta * v), theta),
            ("I1", lambda p, t=theta: rates.rate_i1(p[0], t), (v,), theta),
            ("I2", lambda p, t=theta: rates.rate_i2(p[0], t), (theta * v,), theta),
            ("Itheta", lambda p, t=theta: rates.rate_yule_walker(p[0], t), (theta,), theta),
            ("JS", lambda p, t=theta: rates.rate_js(p[0], p[1], t), (0.0, v), theta),
            ("IXbar", lambda p, t=theta: rates.rate_sample_mean_ar1(p[0], t), (0.0,), theta),
        ]
    for phi in (0.2, -0.5, 0.8):
        v = 1.0 + phi * phi
        cases += [
            ("Kphi", lambda p, f=phi: rates.rate_k_phi(p[0], f), (v,), phi),
            ("KS", lambda p, f=phi: rates.rate_ks(p[0], p[1], f), (0.0, v), phi),
            ("IYbar", lambda p, f=phi: rates.rate_sample_mean_ma1(p[0], f), (0.0,), phi),
        ]
    return cases


@_timed
def check_zero_at_lln(tol=1e-10, shift=1e-2) -> CheckResult:
    """Every rate vanishes at its almost-sure limit and is positive nearby."""
    bad = []
    for name, rate, point, param in lln_cases():
        if abs(rate(point)) > tol:
            bad.append((name, param, "nonzero at LLN", rate(point)))
        dirs = [(1.0,), (-1.0,)] if len(point) == 1 else [
            (math.cos(a), math.sin(a)) for a in np.linspace(0.0, 2 * math.pi, 8, endpoint=False)
        ]
        for d in dirs:
            moved = tuple(p + shift * di for p, di in zip(point, d))
            if not rate(moved) > 0:
                bad.append((name, param, "not positive at", moved))
    return CheckResult(
        "C5 zero at LLN",
        not bad,
        f"{len(lln_cases())} rate/parameter cases; failures {bad[:3]}",
        {"failures": len(bad)},
    )


def ma1_objective_by_quadrature(lam: np.ndarray, x: float, phi: float, nodes: int = 2048) -> np.ndarray:
    """``x lam + (1/4pi) int log(1 - 2 lam h_phi)`` by the periodic trapezoid rule."""
    w = -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes
    h = 1.0 + phi * phi + 2.0 * phi * np.cos(w)
    arg = 1.0 - 2.0 * np.outer(lam, h)
    with np.errstate(invalid="ignore", divide="ignore"):
        integral = np.where(np.all(arg > 0, axis=1), np.log(np.where(arg > 0, arg, 1.0)).mean(axis=1), -np.inf)
    return x * lam + 0.5 * integral


def kphi_by_grid(x: float, phi: float, points: int = 4001) -> float:
    """Dense grid maximisation of the MA(1) dual objective, refined by golden section."""
    top = cgf.ma1_threshold(phi)
    lo = -2.0 / x - 2.0
    grid = np.linspace(lo, top, points)[:-1]
    vals = ma1_objective_by_quadrature(grid, x, phi)
    k = int(np.argmax(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    rep = legendre._golden_section(lambda t: -float(ma1_objective_by_quadrature(np.array([t]), x, phi)[0]), a, b, 1e-12, 200)
    return max(-(-float(ma1_objective_by_quadrature(np.array([rep[0]]), x, phi)[0])), float(vals[k]))


@_timed
def check_ma1_cubic(phis=(0.2, 0.4, 0.6, 0.8), xs=None, tol=1e-6, residual_tol=1e-9) -> CheckResult:
    """The MA(1) maximiser solves the cubic, is admissible, and K_phi matches grid maximisation."""
    xs = np.linspace(0.1, 5.0, 50) if xs is None else xs
    worst_res = worst_val = worst_imag = 0.0
    inadmissible = 0
    for phi in phis:
        coeffs = rates.lambda_phi_cubic
        for x in xs:
            lam = rates.lambda_phi(x, phi)
            c3, c2, c1, c0 = coeffs(x, phi)
            worst_res = max(worst_res, abs(((c3 * lam + c2) * lam + c1) * lam + c0))
            inadmissible += int(not lam < cgf.ma1_threshold(phi))
            worst_val = max(worst_val, abs(rates.rate_k_phi(x, phi) - kphi_by_grid(x, phi)))
            worst_imag = max(worst_imag, abs(rates.lambda_phi_complex(x, phi).imag))
    ok = worst_res <= residual_tol and inadmissible == 0 and worst_val <= tol and worst_imag <= residual_tol
    return CheckResult(
        "C7 MA(1) cubic",
        ok,
        f"max residual {worst_res:.2e}, inadmissible {inadmissible}, max |K - grid| {worst_val:.2e} "
        f"(tol {tol}), max imag {worst_imag:.2e}",
        {"max_residual": worst_res, "max_value_error": worst_val, "max_imag": worst_imag,
         "inadmissible": inadmissible},
    )


# --------------------------------------------------------------------------
# domains


def domain_grid(size: int = 200, box=((-2.0, 0.6), (-2.5, 1.0))):
    (a, b), (c, d) = box
    l1, l2 = np.meshgrid(np.linspace(a, b, size), np.linspace(c, d, size), indexing="ij")
    return l1.ravel(), l2.ravel()


@_timed
def check_domain_agreement(thetas=(0.5, 0.9), size=200, n=256, margin=1e-3) -> CheckResult:
    """Finite-n positive definiteness of D_{n,lambda} agrees with membership in D off the boundary."""
    checked = mismatched = 0
    for theta in thetas:
        l1, l2 = domain_grid(size)
        tags = toeplitz.domain_tags(l1, l2, theta)
        pd, _ = toeplitz.pivot_log_det(1.0 - 2.0 * l1, 1.0 + theta * theta - 2.0 * l1, -theta - l2, n)
        for i in range(len(l1)):
            if toeplitz.boundary_margin((l1[i], l2[i]), theta) < margin:
                continue
            checked += 1
            mismatched += int(bool(pd[i]) != bool(tags[i]))
    return CheckResult(
        "C6 domain agreement",
        mismatched == 0,
        f"{mismatched} mismatches among {checked} grid points with margin >= {margin} (n={n})",
        {"checked": checked, "mismatches": mismatched},
    )


# --------------------------------------------------------------------------
# Monte Carlo

MC_GRID = tuple(range(25, 201, 5))


@_timed
def check_montecarlo(replicates: int = 10**6, seed: int = 0, n_grid=MC_GRID) -> CheckResult:
    """Empirical decay slopes of two rare events match the closed-form rates."""
    cases = [
        (Ar1Params(0.0), empirics.EventSpec("quad_mean", "tail_ge", 2.0), 0.20),
        (Ar1Params(0.5), empirics.EventSpec("yule_walker", "tail_ge", 0.7), 0.25),
    ]
    parts = []
    ok = True
    metrics = {"replicates": replicates, "seed": seed, "n_grid": list(n_grid)}
    for params, event, rel in cases:
        target = empirics.theoretical_event_rate(params, event)
        try:
            est = empirics.estimate_rate(params, event, n_grid, replicates, seed)
        except empirics.EstimationError as exc:
            ok = False
            parts.append(f"{event.statistic}: estimation failed ({exc})")
            continue
        err = abs(est.slope - target) / target
        ok &= err <= rel
        parts.append(
            f"{event.statistic}>={event.level} theta={params.theta}: slope {est.slope:.4f} "
            f"+/- {est.stderr:.4f} vs {target:.6f} (rel err {err:.1%}, tol {rel:.0%}, cells {len(est.n_grid)})"
        )
        metrics[event.statistic] = {"slope": est.slope, "stderr": est.stderr, "target": target,
                                    "relative_error": err, "cells": est.n_grid}
    return CheckResult("C8 Monte Carlo LDP", ok, "; ".join(parts), metrics)


SUITES = {
    "closed-forms": [check_legendre_duality, check_contraction_finite, check_i2_beyond_cutoff,
                     check_zero_at_lln, check_ma1_cubic],
    "domains": [check_domain_agreement],
    "convergence": [check_cgf_convergence, check_route_equivalence],
    "montecarlo": [check_montecarlo],
}
