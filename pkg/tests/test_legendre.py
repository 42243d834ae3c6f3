import math

import numpy as np
import pytest

from gaussldp import cgf, rates, toeplitz
from gaussldp.legendre import contraction_inf_1d, fenchel_legendre_2d
from gaussldp.verification import legendre_transform_of_limit


def test_zero_function():
    rep = fenchel_legendre_2d(lambda lam: 0.0, lambda lam: True, 0.0, 0.0)
    assert rep.value == 0.0 and rep.converged


def test_unbounded_supremum_reported_infinite():
    rep = fenchel_legendre_2d(lambda lam: 0.0, lambda lam: True, 1.0, 0.0)
    assert rep.value == math.inf and rep.boundary_limit


def test_quadratic_known_transform():
    # L = |lam|^2 / 2  ->  transform |(x, y)|^2 / 2
    rep = fenchel_legendre_2d(lambda l: 0.5 * float(l @ l), lambda l: True, 0.3, -1.2)
    assert rep.value == pytest.approx(0.5 * (0.09 + 1.44), abs=1e-10)
    assert np.allclose(rep.argopt, (0.3, -1.2), atol=1e-6)


def test_matches_j_at_figure_point():
    rep = legendre_transform_of_limit(2.0, 1.0, 0.3, restrict_to_domain=True)
    assert abs(rep.value - rates.rate_j(2.0, 1.0, 0.3)) < 1e-6


@pytest.mark.parametrize("theta", [0.0, 0.4, -0.7])
def test_lln_point_maps_to_origin(theta):
    v = 1 / (1 - theta * theta)
    rep = legendre_transform_of_limit(v, theta * v, theta, restrict_to_domain=True)
    assert np.allclose(rep.argopt, (0.0, 0.0), atol=1e-6)
    assert abs(rep.value) < 1e-10


def test_sup_over_d_can_fall_short_of_j():
    # at (3, 0), theta = 0.6 the stationary point has lambda1 > 1/2, outside D
    lam = rates.optimal_lambda_j(3.0, 0.0, 0.6)
    assert not toeplitz.in_domain(lam, 0.6)
    restricted = legendre_transform_of_limit(3.0, 0.0, 0.6, restrict_to_domain=True).value
    extended = legendre_transform_of_limit(3.0, 0.0, 0.6).value
    assert restricted < rates.rate_j(3.0, 0.0, 0.6) - 1e-3
    assert abs(extended - rates.rate_j(3.0, 0.0, 0.6)) < 1e-9


def test_contraction_examples():
    t = 0.5
    j = lambda x, y: rates.rate_j(x, y, t)
    c = 1 / (1 - t * t)
    rep = contraction_inf_1d(j, lambda s: (c, s), (-c, c))
    assert abs(rep.value) < 1e-12 and rep.argopt[0] == pytest.approx(t * c, abs=1e-6)
    rep = contraction_inf_1d(j, lambda s: (s, 0.7 * s), (0.0, 30.0))
    assert abs(rep.value - rates.rate_yule_walker(0.7, t)) < 1e-8


def test_contraction_all_infinite():
    rep = contraction_inf_1d(lambda x, y: math.inf, lambda s: (s, s), (0.0, 1.0))
    assert rep.value == math.inf


def test_lag1_infimum_beyond_cutoff_is_finite():
    # J(x, c) is finite for every x > |c|, so the infimum along y = c stays
    # finite past the cutoff where the closed form is declared infinite
    t = 0.0
    c = 1.2 * rates.i2_cutoff(t)
    rep = contraction_inf_1d(lambda x, y: rates.rate_j(x, y, t), lambda s: (s, c), (c, c + 25))
    assert math.isfinite(rep.value)
    x = rep.argopt[0]
    s = 1 + t * t
    assert abs(s * x**3 - x**2 - s * c * c * x - c * c) < 1e-6 * x**3
    assert rates.rate_i2(c, t) == math.inf


def test_bad_bracket():
    with pytest.raises(ValueError):
        contraction_inf_1d(lambda x, y: 0.0, lambda s: (s, s), (1.0, 1.0))
