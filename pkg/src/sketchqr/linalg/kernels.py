"""Deterministic dense kernels built on LAPACK via scipy."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from ..config import RANGE_DROP_TOL, UNIT_ROUNDOFF
from ..errors import DimensionError, SingularPreconditionerError
from ..logging import get_logger
from .dense import DenseMatrix, as_dense

logger = get_logger(__name__)


@dataclass(frozen=True)
class CholeskyResult:
    """Outcome of a Cholesky factorization.

    ``info`` is 0 on success, otherwise the 1-based order of the first leading
    minor that is not positive definite. On failure ``R`` still holds the
    valid leading (info - 1) x (info - 1) factor.
    """

    R: DenseMatrix
    info: int

    @property
    def ok(self) -> bool:
        return self.info == 0

    @property
    def leading(self) -> DenseMatrix:
        """Largest valid leading block of the factor."""
        size = self.R.shape[0] if self.ok else self.info - 1
        return self.R[:size, :size]


def householder_qr(M: DenseMatrix) -> Tuple[DenseMatrix, DenseMatrix]:
    """
    Unpivoted thin QR by Householder reflectors.

    Args:
        M: rows x cols matrix with rows >= cols

    Returns:
        (Q, R) with Q rows x cols orthonormal and R cols x cols upper-triangular
    """
    M = as_dense(M)
    m, n = M.shape
    if m < n:
        raise DimensionError(f"householder_qr needs rows >= cols, got {m}x{n}")
    if n == 0:
        return np.zeros((m, 0), order="F"), np.zeros((0, 0), order="F")
    Q, R = sla.qr(M, mode="economic", check_finite=False)
    return np.asfortranarray(Q), np.asfortranarray(R)


def cholesky(G: DenseMatrix) -> CholeskyResult:
    """
    Upper Cholesky factor of a symmetric matrix, G = R^T R.

    Only the upper triangle of G is read. Failure is reported through
    ``info`` instead of an exception so callers can shrink to the valid
    leading block.
    """
    G = as_dense(G)
    if G.shape[0] != G.shape[1]:
        raise DimensionError(f"cholesky needs a square matrix, got {G.shape}")
    if G.shape[0] == 0:
        return CholeskyResult(np.zeros((0, 0), order="F"), 0)
    R, info = lapack.dpotrf(G, lower=0, clean=1, overwrite_a=0)
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}")
    R = np.triu(R)
    if info > 0:
        logger.debug(f"Cholesky failed at leading minor {info} of {G.shape[0]}")
        R[info - 1 :, :] = 0.0
    return CholeskyResult(np.asfortranarray(R), int(info))


def trsm_right(M: DenseMatrix, R: DenseMatrix) -> DenseMatrix:
    """
    Solve X R = M for X with R square upper-triangular.

    Raises:
        SingularPreconditionerError: R has a zero diagonal entry
    """
    M = as_dense(M)
    R = as_dense(R)
    k = R.shape[0]
    if R.shape[1] != k or M.shape[1] != k:
        raise DimensionError(f"trsm_right: M is {M.shape}, R is {R.shape}")
    diag = np.diag(R)
    if np.any(diag == 0.0):
        j = int(np.flatnonzero(diag == 0.0)[0])
        raise SingularPreconditionerError(f"preconditioner has zero diagonal at position {j}")
    if k == 0:
        return np.zeros(M.shape, order="F")
    # X R = M  <=>  R^T X^T = M^T
    Xt = sla.solve_triangular(R, M.T, trans="T", lower=False, check_finite=False)
    return np.asfortranarray(Xt.T)


def gram(M: DenseMatrix) -> DenseMatrix:
    """Return M^T M, exactly symmetric."""
    M = as_dense(M)
    G = M.T @ M
    G = np.triu(G) + np.triu(G, 1).T
    return np.asfortranarray(G)


def orthonormal_basis(M: DenseMatrix, drop_tol: float = RANGE_DROP_TOL) -> DenseMatrix:
    """
    Orthonormal basis for the numerical range of M.

    Uses column-pivoted QR and keeps the leading columns whose |R[i, i]|
    exceeds drop_tol * |R[0, 0]|.
    """
    M = as_dense(M)
    m, n = M.shape
    if n == 0 or m == 0:
        return np.zeros((m, 0), order="F")
    Q, R, _ = sla.qr(M, mode="economic", pivoting=True, check_finite=False)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return np.zeros((m, 0), order="F")
    r = int(np.count_nonzero(diag > drop_tol * diag[0]))
    return np.asfortranarray(Q[:, :r])


def numerical_rank(M: DenseMatrix, tol: Optional[float] = None) -> int:
    """Number of singular values above tol * sigma_1 (default max(m, n) * u)."""
    from .spectral import svd_values

    M = as_dense(M)
    sigma = svd_values(M)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    if tol is None:
        tol = max(M.shape) * UNIT_ROUNDOFF
    return int(np.count_nonzero(sigma > tol * sigma[0]))
