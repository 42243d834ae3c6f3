import math

import numpy as np
import pytest
from scipy import stats

from gaussldp import spectral, toeplitz
from gaussldp.toeplitz import (
    DomainRegion,
    OutOfCaseError,
    TriDiag,
    ar1_covariance,
    ar1_precision,
    d_matrix,
    determinant,
    domain_membership,
    g_map,
    g_map_fixed_points,
    is_positive_definite,
    pivots,
    product_eigenvalues,
)


def test_precision_examples():
    assert np.array_equal(ar1_precision(0.0, 4).to_dense(), np.eye(4))
    p = ar1_precision(0.5, 3)
    assert (p.corner, p.interior, p.off) == (1.0, 1.25, -0.5)
    assert np.allclose(p.to_dense() @ ar1_covariance(0.5, 3), np.eye(3), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 10, 64])
def test_precision_determinant(n):
    assert determinant(ar1_precision(0.5, n)) == pytest.approx(0.75, rel=1e-12)
    assert np.linalg.det(ar1_precision(0.5, n).to_dense()) == pytest.approx(0.75, rel=1e-10)


def test_precision_inverts_covariance(rng):
    for _ in range(10):
        theta, n = rng.uniform(-0.95, 0.95), int(rng.integers(2, 60))
        prod = ar1_precision(theta, n).to_dense() @ ar1_covariance(theta, n)
        assert np.allclose(prod, np.eye(n), atol=1e-9)


def test_d_matrix_examples():
    assert np.array_equal(d_matrix((0, 0), 0.0, 5).to_dense(), np.eye(5))
    d = d_matrix((0.0, -0.7), 0.7, 4)
    assert d.corner == 1.0 and d.interior == pytest.approx(1.49) and d.off == 0.0
    d = d_matrix((0.1, 0.2), 0.5, 5)
    assert (d.corner, d.interior, d.off) == pytest.approx((0.8, 1.05, -0.7))


def test_d_matrix_equals_precision_minus_toeplitz(rng):
    for _ in range(10):
        lam = tuple(rng.uniform(-1, 1, 2))
        theta, n = rng.uniform(-0.9, 0.9), int(rng.integers(2, 30))
        want = np.linalg.inv(ar1_covariance(theta, n)) - 2 * toeplitz.toeplitz_phi(lam, n)
        assert np.allclose(d_matrix(lam, theta, n).to_dense(), want, atol=1e-9)


def test_pivot_examples():
    assert np.array_equal(pivots(TriDiag(5, 1.0, 1.0, 0.0)).data, np.ones(5))
    p = pivots(TriDiag(4, 1.0, 5.0, 2.0))
    assert list(p.data) == [1.0, 1.0, 1.0, -3.0] and not np.ma.is_masked(p)
    assert not is_positive_definite(TriDiag(4, 1.0, 5.0, 2.0))
    with pytest.raises(np.linalg.LinAlgError):
        np.linalg.cholesky(TriDiag(4, 1.0, 5.0, 2.0).to_dense())


def test_pivots_mask_after_first_nonpositive():
    p = pivots(TriDiag(6, -0.5, 2.0, 0.1))
    assert p.data[0] == -0.5 and p.mask[1:].all() and not p.mask[0]


def test_pivot_product_matches_dense_determinant(rng):
    for _ in range(100):
        lam = (rng.uniform(-1.5, 0.5), rng.uniform(-1.5, 1.5))
        theta, n = rng.uniform(-0.95, 0.95), int(rng.integers(2, 65))
        d = d_matrix(lam, theta, n)
        dense = np.linalg.det(d.to_dense())
        assert determinant(d) == pytest.approx(dense, rel=1e-10, abs=1e-300)


def test_positive_definiteness_examples():
    for n in (2, 9, 100):
        assert is_positive_definite(TriDiag(n, 1.0, 1.0, 0.0))
    assert not is_positive_definite(d_matrix((0.6, 0.0), 0.0, 2))


def test_positive_definiteness_matches_eigenvalues(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 129))
        d = TriDiag(n, *rng.uniform(-1, 3, 2), rng.uniform(-1.5, 1.5))
        mineig = np.linalg.eigvalsh(d.to_dense())[0]
        if abs(mineig) < 1e-10:
            continue
        assert is_positive_definite(d) == (mineig > 0)


def test_vectorised_pivot_log_det_matches_scalar(rng):
    corner, interior, off = rng.uniform(-0.5, 2, 50), rng.uniform(0, 3, 50), rng.uniform(-1, 1, 50)
    pd, logdet = toeplitz.pivot_log_det(corner, interior, off, 20)
    for i in range(50):
        d = TriDiag(20, corner[i], interior[i], off[i])
        assert bool(pd[i]) == is_positive_definite(d)
        if pd[i]:
            assert logdet[i] == pytest.approx(math.log(determinant(d)), rel=1e-12, abs=1e-12)
        else:
            assert math.isnan(logdet[i])


def test_fixed_points():
    r, q = g_map_fixed_points(5.0, 2.0)
    assert (r, q) == pytest.approx((1.0, 4.0))
    assert g_map(1.0, 5, 2) == pytest.approx(1.0) and g_map(4.0, 5, 2) == pytest.approx(4.0)
    assert g_map_fixed_points(2.0, 0.0) == pytest.approx((0.0, 2.0))
    with pytest.raises(OutOfCaseError):
        g_map_fixed_points(1.0, 0.5)


def test_iteration_converges_to_attractor(rng):
    for _ in range(100):
        p = rng.uniform(0.5, 4)
        q = rng.uniform(-0.45, 0.45) * p
        r, big = g_map_fixed_points(p, q)
        a = r + rng.uniform(1e-3, 5)
        for _ in range(1000):
            a = g_map(a, p, q)
            if abs(a - big) < 1e-10:
                break
        assert abs(a - big) < 1e-10


def test_domain_examples():
    for theta in (-0.9, 0.0, 0.9):
        assert domain_membership((0.0, 0.0), theta) is DomainRegion.D1
    assert domain_membership((0.5, 0.0), 0.5) is DomainRegion.OUTSIDE
    assert domain_membership((0.4, -0.5), 0.5) is DomainRegion.D2
    assert str(DomainRegion.OUTSIDE) == "Outside"


def test_domain_tags_match_scalar(rng):
    l1, l2 = rng.uniform(-2, 0.6, 500), rng.uniform(-2.5, 1, 500)
    tags = toeplitz.domain_tags(l1, l2, 0.9)
    names = {0: DomainRegion.OUTSIDE, 1: DomainRegion.D1, 2: DomainRegion.D2}
    assert all(names[int(t)] is domain_membership((a, b), 0.9) for t, a, b in zip(tags, l1, l2))


@pytest.mark.parametrize("theta", [0.5, 0.9])
def test_domain_agrees_with_finite_n_pd(theta):
    l1, l2 = np.meshgrid(np.linspace(-2, 0.6, 60), np.linspace(-2.5, 1, 60), indexing="ij")
    l1, l2 = l1.ravel(), l2.ravel()
    tags = toeplitz.domain_tags(l1, l2, theta)
    pd, _ = toeplitz.pivot_log_det(1 - 2 * l1, 1 + theta**2 - 2 * l1, -theta - l2, 256)
    for i in range(len(l1)):
        if toeplitz.boundary_margin((l1[i], l2[i]), theta) >= 1e-3:
            assert bool(pd[i]) == bool(tags[i])


def test_boundary_margin_zero_on_boundary():
    theta = 0.6
    # parabola point of D2: (theta + lam2)^2 = theta^2 (1 - 2 lam1)
    lam1 = 0.4
    lam2 = theta * math.sqrt(1 - 2 * lam1) - theta
    assert toeplitz.boundary_margin((lam1, lam2), theta) < 1e-12
    assert toeplitz.boundary_margin((-1.0, -theta), theta) > 0.5


def test_eigenvalues_iid_case():
    alpha = product_eigenvalues((0.3, 0.0), 0.0, 20)
    assert np.allclose(alpha, 0.3)


def test_eigenvalues_match_generalised_problem(rng):
    lam, theta, n = (0.2, -0.3), 0.6, 15
    a = toeplitz.toeplitz_phi(lam, n) @ ar1_covariance(theta, n)
    assert np.allclose(np.sort(np.linalg.eigvals(a).real), product_eigenvalues(lam, theta, n), atol=1e-10)


def test_eigenvalue_bound(rng):
    for _ in range(100):
        lam = tuple(rng.uniform(-1, 1, 2))
        theta, n = rng.uniform(-0.9, 0.9), int(rng.integers(2, 129))
        bound = (abs(lam[0]) + abs(lam[1])) / (1 - abs(theta)) ** 2
        alpha = product_eigenvalues(lam, theta, n)
        assert np.max(np.abs(alpha)) <= bound * (1 + 1e-10)


def test_szego_distribution():
    lam, theta = (0.2, 0.3), 0.5
    alpha = product_eigenvalues(lam, theta, 512)
    w = np.linspace(-math.pi, math.pi, 200001)
    symbol = spectral.phi_lambda(w, lam) * spectral.g_theta(w, theta)
    assert stats.ks_2samp(alpha, symbol).statistic < 0.05


def test_dense_cap():
    with pytest.raises(ValueError, match="pivot"):
        product_eigenvalues((0.1, 0.1), 0.5, 2000)
