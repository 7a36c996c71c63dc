"""Tests for the dense kernels."""

import numpy as np
import pytest

from sketchqr.errors import DimensionError, SingularPreconditionerError
from sketchqr.linalg import (
    TriangularPartition,
    as_dense,
    cholesky,
    cond_2,
    estimate_spectral_norm,
    gram,
    householder_qr,
    numerical_rank,
    orthonormal_basis,
    read_matrix_market,
    spectral_norm,
    svd_values,
    trsm_right,
    write_matrix_market,
)


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def _orthogonal(rng, m, n):
    Q, _ = np.linalg.qr(rng.standard_normal((m, n)))
    return Q


def test_as_dense_is_column_major_and_rejects_nan():
    """Test coercion to a Fortran float64 matrix."""
    M = as_dense([[1, 2], [3, 4]])
    assert M.dtype == np.float64
    assert M.flags.f_contiguous
    assert M[0, 1] == 2.0
    with pytest.raises(ValueError):
        as_dense([[1.0, np.nan]])
    with pytest.raises(DimensionError):
        as_dense([1.0, 2.0])


def test_partition_stacks_back():
    """Test that [A B; 0 C] reproduces the source."""
    R = np.triu(_rng(1).standard_normal((5, 7)))
    part = TriangularPartition(R, 2)
    assert part.A.shape == (2, 2)
    assert part.B.shape == (2, 5)
    assert part.C.shape == (3, 5)
    np.testing.assert_array_equal(part.stack(), R)
    with pytest.raises(DimensionError):
        TriangularPartition(R, 0)


def test_householder_qr_identity():
    """Test QR of the identity."""
    Q, R = householder_qr(np.eye(3))
    np.testing.assert_allclose(np.abs(R), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(np.abs(Q), np.eye(3), atol=1e-15)


def test_householder_qr_orthogonal_columns():
    """Test QR of already-orthogonal columns."""
    M = np.zeros((3, 2))
    M[0, 0], M[1, 1] = 2.0, 3.0
    _, R = householder_qr(M)
    np.testing.assert_allclose(np.abs(R), np.diag([2.0, 3.0]), atol=1e-15)


def test_householder_qr_residual():
    """Test the reconstruction residual on a random matrix."""
    M = _rng(0).standard_normal((50, 10))
    Q, R = householder_qr(M)
    assert np.linalg.norm(M - Q @ R) / np.linalg.norm(M) <= 1e-14
    assert np.linalg.norm(Q.T @ Q - np.eye(10), 2) <= 1e-14
    assert not np.any(np.tril(R, -1))
    with pytest.raises(DimensionError):
        householder_qr(M.T)


def test_cholesky_identity_and_failure():
    """Test Cholesky success and the 1-based failure index."""
    result = cholesky(np.eye(4))
    assert result.ok
    np.testing.assert_array_equal(result.R, np.eye(4))

    result = cholesky(np.array([[1.0, 0.0], [0.0, -1.0]]))
    assert result.info == 2
    assert not result.ok
    np.testing.assert_array_equal(result.leading, [[1.0]])


def test_cholesky_gram_residual():
    """Test R^T R = G for a well-conditioned Gram matrix."""
    M = _rng(2).standard_normal((100, 5))
    G = gram(M)
    R = cholesky(G).R
    assert np.linalg.norm(R.T @ R - G) <= 1e-14 * np.linalg.norm(G)


def test_cholesky_round_trips_triangular():
    """Test that cholesky(R^T R) returns R."""
    rng = _rng(3)
    R = np.triu(rng.standard_normal((8, 8)))
    R[np.diag_indices(8)] = np.abs(R.diagonal()) + 1.0
    back = cholesky(R.T @ R).R
    assert np.linalg.norm(back - R) <= 1e-13 * np.linalg.norm(R)


def test_trsm_right():
    """Test X R = M for identity, self and QR inputs."""
    rng = _rng(4)
    M = rng.standard_normal((6, 3))
    np.testing.assert_array_equal(trsm_right(M, np.eye(3)), M)

    R = np.triu(rng.standard_normal((4, 4))) + 4.0 * np.eye(4)
    np.testing.assert_allclose(trsm_right(R, R), np.eye(4), atol=1e-14)

    M = rng.standard_normal((200, 20))
    _, R = householder_qr(M)
    X = trsm_right(M, R)
    assert abs(cond_2(X) - 1.0) <= 1e-10


def test_trsm_right_zero_diagonal():
    """Test that a singular preconditioner raises."""
    R = np.triu(np.ones((3, 3)))
    R[1, 1] = 0.0
    with pytest.raises(SingularPreconditionerError):
        trsm_right(np.ones((5, 3)), R)


def test_gram():
    """Test Gram products against dot products."""
    np.testing.assert_array_equal(gram(np.eye(3)), np.eye(3))
    np.testing.assert_array_equal(gram(np.ones((3, 1))), [[3.0]])

    M = _rng(5).standard_normal((30, 6))
    G = gram(M)
    assert np.array_equal(G, G.T)
    for i in range(6):
        for j in range(6):
            assert abs(G[i, j] - np.dot(M[:, i], M[:, j])) <= 1e-15 * 30 * np.abs(M).max() ** 2


def test_svd_values_examples():
    """Test singular values of diagonal, zero and synthesized matrices."""
    np.testing.assert_allclose(svd_values(np.diag([3.0, 2.0, 1.0])), [3.0, 2.0, 1.0], rtol=1e-15)
    np.testing.assert_array_equal(svd_values(np.zeros((4, 3))), np.zeros(3))

    rng = _rng(6)
    U = _orthogonal(rng, 20, 3)
    V = _orthogonal(rng, 3, 3)
    M = U @ np.diag([10.0, 1.0, 0.1]) @ V.T
    np.testing.assert_allclose(svd_values(M), [10.0, 1.0, 0.1], atol=1e-12 * 10.0)


def test_svd_values_matches_lapack_and_vectors():
    """Test the Jacobi SVD against LAPACK, on tall and wide inputs."""
    M = _rng(7).standard_normal((40, 12))
    expected = np.linalg.svd(M, compute_uv=False)
    np.testing.assert_allclose(svd_values(M), expected, rtol=1e-12)
    np.testing.assert_allclose(svd_values(M.T), expected, rtol=1e-12)

    U, sigma, Vt = svd_values(M, vectors=True)
    assert U.shape == (40, 12) and Vt.shape == (12, 12)
    assert np.linalg.norm(M - (U * sigma) @ Vt) <= 1e-13 * np.linalg.norm(M)


def test_svd_values_permutation_sign_invariant():
    """Test that column permutations and sign flips leave sigma unchanged."""
    rng = _rng(8)
    M = rng.standard_normal((25, 7))
    P = rng.permutation(7)
    D = np.where(rng.random(7) < 0.5, -1.0, 1.0)
    np.testing.assert_allclose(svd_values(M[:, P] * D), svd_values(M), rtol=1e-12)


def test_spectral_norm_and_cond():
    """Test the power-iteration estimators."""
    D = np.diag([5.0, 1.0])
    assert spectral_norm(D) == pytest.approx(5.0, rel=1e-8)
    assert cond_2(D) == pytest.approx(5.0, rel=1e-8)

    Q = _orthogonal(_rng(9), 30, 8)
    assert 1.0 - 1e-8 <= cond_2(Q) <= 1.0 + 1e-8

    estimate = estimate_spectral_norm(_rng(10).standard_normal((20, 6)))
    assert estimate.converged


def test_cond_2_triangular_against_svd():
    """Test cond_2 of a triangular matrix against the SVD oracle."""
    rng = _rng(11)
    values = np.concatenate([[10.0, 5.0], np.linspace(4.0, 2.0, 60), [1.0, 0.5]])
    T = householder_qr(_orthogonal(rng, 64, 64) * values @ _orthogonal(rng, 64, 64).T)[1]
    sigma = svd_values(T)
    assert cond_2(T) == pytest.approx(sigma[0] / sigma[-1], rel=1e-6)


def test_orthonormal_basis_and_rank():
    """Test range bases and numerical rank of a rank-deficient product."""
    rng = _rng(12)
    M = rng.standard_normal((30, 4)) @ rng.standard_normal((4, 9))
    U = orthonormal_basis(M)
    assert U.shape == (30, 4)
    np.testing.assert_allclose(U.T @ U, np.eye(4), atol=1e-14)
    assert numerical_rank(M) == 4
    assert numerical_rank(np.zeros((5, 3))) == 0


def test_matrix_market_round_trip(tmp_path):
    """Test Matrix Market writing and reading in both layouts."""
    M = _rng(13).standard_normal((6, 4))
    M[2, 1] = 0.0
    for coordinate in (False, True):
        path = tmp_path / f"m_{coordinate}.mtx"
        write_matrix_market(path, M, coordinate=coordinate)
        np.testing.assert_array_equal(read_matrix_market(path), M)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
