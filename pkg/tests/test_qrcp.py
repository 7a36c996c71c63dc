"""Tests for column-pivoted QR and the validation contract."""

import numpy as np
import pytest

from sketchqr.config import UNIT_ROUNDOFF
from sketchqr.qrcp import PivotedQR, orthogonality_loss, qrcp_geqp3, qrcp_gram_schmidt, qrcp_maxnorm, validate
from sketchqr.testmat import gen_kahan


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def _separated(seed, m=100, n=30):
    rng = _rng(seed)
    return rng.standard_normal((m, n)) * 2.0 ** -rng.permutation(n).astype(float)


@pytest.mark.parametrize("qrcp", [qrcp_maxnorm, qrcp_gram_schmidt])
def test_diagonal_input(qrcp):
    """Test that column norms order the pivots."""
    dec = qrcp(np.diag([1.0, 5.0, 3.0]))
    np.testing.assert_array_equal(dec.J, [1, 2, 0])
    np.testing.assert_allclose(np.abs(np.diag(dec.R)), [5.0, 3.0, 1.0])
    assert dec.k == 3


def test_zero_matrix():
    """Test that the zero matrix gives an empty factorization."""
    dec = qrcp_maxnorm(np.zeros((4, 3)))
    assert dec.k == 0
    np.testing.assert_array_equal(dec.J, [0, 1, 2])
    assert dec.Q.shape == (4, 0)
    assert dec.R.shape == (0, 3)


def test_kahan_is_not_pivoted():
    """Test that max-norm pivoting keeps the Kahan matrix in order."""
    K = gen_kahan(16, 0.285)
    np.testing.assert_array_equal(qrcp_maxnorm(K).J, np.arange(16))
    np.testing.assert_array_equal(qrcp_gram_schmidt(K).J, np.arange(16))


def test_householder_output_is_valid():
    """Test the valid-decomposition contract on random input."""
    M = _rng(1).standard_normal((60, 25))
    dec = qrcp_maxnorm(M)
    report = validate(dec, M)
    assert report.passed, report.failures
    assert report.tol == pytest.approx(100 * 25 * UNIT_ROUNDOFF)
    diag = np.abs(np.diag(dec.R))
    assert np.all(diag[:-1] >= diag[1:])
    assert orthogonality_loss(dec.Q) <= 50 * 25**1.5 * UNIT_ROUNDOFF


def test_gram_schmidt_residual():
    """Test the Gram-Schmidt residual."""
    M = _rng(2).standard_normal((80, 20))
    dec = qrcp_gram_schmidt(M)
    assert np.linalg.norm(M[:, dec.J] - dec.Q @ dec.R) <= 1e-12 * np.linalg.norm(M)


@pytest.mark.parametrize("seed", range(10))
def test_pivot_agreement(seed):
    """Test that both variants pick the same pivots on separated norms."""
    M = _separated(seed)
    np.testing.assert_array_equal(qrcp_maxnorm(M).J, qrcp_gram_schmidt(M).J)


def test_pivot_scale_invariance():
    """Test that scaling M does not change the pivots."""
    M = _rng(3).standard_normal((40, 12))
    J = qrcp_maxnorm(M).J
    np.testing.assert_array_equal(qrcp_maxnorm(-3.7 * M).J, J)
    np.testing.assert_array_equal(qrcp_maxnorm(1e-8 * M).J, J)


def test_rank_tol_stops_early():
    """Test that a rank-deficient input stops at its rank."""
    rng = _rng(4)
    M = rng.standard_normal((50, 6)) @ rng.standard_normal((6, 15))
    dec = qrcp_maxnorm(M, rank_tol=1e-10)
    assert dec.k == 6
    assert np.linalg.norm(M[:, dec.J] - dec.Q @ dec.R) <= 1e-10 * np.linalg.norm(M)


def test_max_steps():
    """Test a capped number of pivots."""
    M = _rng(5).standard_normal((30, 10))
    dec = qrcp_maxnorm(M, max_steps=3)
    assert dec.k == 3
    assert dec.R.shape == (3, 10)
    np.testing.assert_array_equal(dec.J[:3], qrcp_maxnorm(M).J[:3])


def test_r_only_matches_full_factorization():
    """Test that skipping Q leaves R and J unchanged."""
    M = _rng(7).standard_normal((90, 20))
    full = qrcp_maxnorm(M)
    bare = qrcp_maxnorm(M, form_q=False)
    np.testing.assert_array_equal(bare.J, full.J)
    np.testing.assert_array_equal(bare.R, full.R)
    assert bare.Q.shape == (90, 0)
    assert np.linalg.norm(M[:, full.J] - full.Q @ full.R) <= 1e-13 * np.linalg.norm(M)


@pytest.mark.parametrize("seed", range(5))
def test_geqp3_reference_agrees(seed):
    """Test that the LAPACK reference picks the same pivots and |R|."""
    M = _separated(seed)
    ref = qrcp_geqp3(M)
    dec = qrcp_maxnorm(M)
    assert ref.k == 30
    assert ref.R.shape == (30, 30)
    np.testing.assert_array_equal(ref.J, dec.J)
    np.testing.assert_allclose(np.abs(ref.R), np.abs(dec.R), rtol=1e-10, atol=1e-12 * np.abs(dec.R).max())


def test_geqp3_reference_is_complete():
    """Test that rank-deficient input still yields a full n x n R."""
    rng = _rng(8)
    M = rng.standard_normal((50, 3)) @ rng.standard_normal((3, 8))
    ref = qrcp_geqp3(M)
    assert ref.k == 8
    assert ref.R.shape == (8, 8)
    assert sorted(ref.J.tolist()) == list(range(8))
    assert np.all(np.abs(np.diag(ref.R))[3:] <= 1e-12 * abs(ref.R[0, 0]))


def test_validate_failures():
    """Test triangularity and permutation failures."""
    M = _rng(6).standard_normal((4, 4))
    report = validate(PivotedQR(Q=np.eye(4), R=M, J=np.arange(4), k=4), M)
    assert "triangularity" in report.failures
    assert not report.passed

    dec = qrcp_maxnorm(M)
    bad = PivotedQR(Q=dec.Q, R=dec.R, J=np.array([0, 0, 1, 2]), k=dec.k)
    assert "permutation" in validate(bad, M).failures


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
