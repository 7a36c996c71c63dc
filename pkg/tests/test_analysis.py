"""Tests for the RRQR, inheritance, similarity and pivot-quality checks."""

import math

import numpy as np
import pytest

from sketchqr.analysis import (
    complete_factorization,
    diag_ratio_bounds,
    gu_eisenstat_budget,
    inheritance_check,
    maxnorm_similarity_check,
    pivot_quality,
    rrqr_report,
    safe_ratio,
)
from sketchqr.errors import DimensionError, RankMismatchError
from sketchqr.linalg import svd_values
from sketchqr.qrcp import qrcp_geqp3, qrcp_maxnorm
from sketchqr.sketching import SketchFamily, sample
from sketchqr.testmat import gen_exact_rank, gen_gaussian


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def _orthogonal(seed, n):
    Q, _ = np.linalg.qr(_rng(seed).standard_normal((n, n)))
    return Q


def test_safe_ratio_conventions():
    """Test 0/0 -> 1 and x/0 -> inf."""
    out = safe_ratio([0.0, 1.0, 2.0], [0.0, 0.0, 4.0])
    assert out[0] == 1.0
    assert math.isinf(out[1])
    assert out[2] == 0.5


def test_rrqr_report_diagonal():
    """Test RRQR factors of a diagonal R with its own singular values."""
    report = rrqr_report(np.diag([3.0, 2.0, 1.0]), np.array([3.0, 2.0, 1.0]))
    assert report.ells == [1, 2, 3]
    np.testing.assert_allclose(report.f, [1.0, 1.0, 1.0])
    assert report.g == [0.0, 0.0, 0.0]
    assert report.budget[0] == pytest.approx(3.0)
    assert gu_eisenstat_budget(2, 3) == pytest.approx(3.0)


def test_rrqr_report_interlacing():
    """Test that both RRQR factors are at least one for a QRCP R factor."""
    M = gen_gaussian(60, 12, seed=1)
    R = qrcp_maxnorm(M).R
    report = rrqr_report(R, svd_values(M))
    assert min(report.f_lower) >= 1.0 - 1e-12
    assert min(report.f_upper) >= 1.0 - 1e-12
    assert all(math.isfinite(g) for g in report.g)
    with pytest.raises(ValueError):
        rrqr_report(R, svd_values(M)[:5])


def test_inheritance_with_orthogonal_sketch():
    """Test that an orthogonal sketch transfers every bound with zero margin."""
    M = gen_exact_rank(12, 8, 5, seed=2)
    S = _orthogonal(2, 12)
    report = inheritance_check(M, S, np.arange(8))
    assert report.effective_distortion <= 1e-14
    assert report.ells == [1, 2, 3, 4, 5]
    assert report.passed


@pytest.mark.parametrize("seed", range(5))
def test_inheritance_with_gaussian_sketch(seed):
    """Test the transfer bounds for random pivots and a Gaussian sketch."""
    M = gen_exact_rank(12, 8, 5, seed=seed)
    S = sample(SketchFamily.GAUSSIAN, 10, 12, seed=seed)
    J = _rng(seed).permutation(8)
    report = inheritance_check(M, S, J)
    assert report.passed, report.min_slack


def test_inheritance_rank_mismatch():
    """Test that a sketch with too few rows raises."""
    M = gen_exact_rank(12, 8, 5, seed=3)
    with pytest.raises(RankMismatchError):
        inheritance_check(M, sample(SketchFamily.GAUSSIAN, 3, 12, seed=3), np.arange(8))


@pytest.mark.parametrize("ell", range(4))
def test_maxnorm_similarity_orthogonal_sketch(ell):
    """Test that an orthogonal sketch reproduces the exact pivot."""
    M = gen_gaussian(30, 10, seed=4)
    report = maxnorm_similarity_check(M, _orthogonal(4, 30), ell)
    assert report.sigma_bound == pytest.approx(1.0)
    assert report.sharp_bound == pytest.approx(1.0)
    assert report.phi_sketched_pivot == pytest.approx(report.phi_pivot, rel=1e-12)
    assert report.passed


@pytest.mark.parametrize("seed", range(5))
def test_maxnorm_similarity_first_pivot(seed):
    """Test both bounds on the first pivot with a Gaussian sketch."""
    M = gen_gaussian(50, 20, seed=seed)
    S = sample(SketchFamily.GAUSSIAN, 22, 50, seed=seed)
    report = maxnorm_similarity_check(M, S, 0)
    assert 0.0 <= report.sigma_bound <= 1.0
    assert report.passed


def test_maxnorm_similarity_rejects_ell():
    """Test that ell must lie below the rank."""
    M = gen_exact_rank(20, 6, 3, seed=5)
    with pytest.raises(ValueError):
        maxnorm_similarity_check(M, np.eye(20), 3)


def test_complete_factorization():
    """Test extension of a truncated QRCP to all columns."""
    M = gen_gaussian(30, 10, seed=6)
    dec = qrcp_maxnorm(M, max_steps=4)
    full = complete_factorization(M, dec)
    assert full.k == 10
    assert full.R.shape == (10, 10)
    assert not np.any(np.tril(full.R, -1))
    np.testing.assert_array_equal(full.R[:4, :4], dec.R[:, :4])
    np.testing.assert_allclose(full.R[:4], dec.R, atol=1e-13 * np.linalg.norm(M))
    assert np.linalg.norm(M[:, full.J] - full.Q @ full.R) <= 1e-13 * np.linalg.norm(M)
    np.testing.assert_allclose(full.Q.T @ full.Q, np.eye(10), atol=1e-13)
    assert complete_factorization(M, full) is full

    with pytest.raises(DimensionError):
        complete_factorization(M, qrcp_maxnorm(M, max_steps=4, form_q=False))


def test_diag_ratio_bounds():
    """Test the achievable range of diagonal ratios."""
    assert diag_ratio_bounds(1) == (1.0, 1.0)
    lo, hi = diag_ratio_bounds(3)
    assert lo == pytest.approx(1.0 / math.sqrt(6.0))
    assert hi == 4.0


def test_pivot_quality_against_itself():
    """Test unit trailing ratios for identical decompositions."""
    M = gen_gaussian(40, 8, seed=7)
    dec = qrcp_maxnorm(M)
    curves = pivot_quality(M, dec, dec)
    assert curves.ks == list(range(1, 9))
    np.testing.assert_allclose(curves.trailing_ratio, np.ones(8))
    assert curves.trailing_within(0.5, 2.0)
    assert curves.diag_ratio_ref == curves.diag_ratio_test
    lo, hi = diag_ratio_bounds(8)
    assert all(lo * (1 - 1e-12) <= r <= hi for r in curves.diag_ratio_ref)


def test_pivot_quality_with_lapack_reference():
    """Test that the R-only LAPACK reference matches the Householder curves."""
    M = gen_gaussian(60, 10, seed=8)
    dec = qrcp_maxnorm(M)
    curves = pivot_quality(M, qrcp_geqp3(M), dec)
    np.testing.assert_allclose(curves.trailing_ratio, np.ones(10), rtol=1e-8)
    np.testing.assert_allclose(curves.diag_ratio_ref, curves.diag_ratio_test, rtol=1e-8)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
