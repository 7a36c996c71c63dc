"""Pivot-quality curves: trailing-norm ratios and diagonal ratios."""

import math
from typing import Optional, Tuple

import numpy as np

from ..errors import DimensionError
from ..factor import trailing_norms
from ..linalg import DenseMatrix, as_dense, householder_qr, svd_values
from ..logging import get_logger
from ..qrcp import PivotedQR
from .models import PivotQualityCurves
from .ratios import safe_ratio

logger = get_logger(__name__)


def complete_factorization(M: DenseMatrix, dec: PivotedQR) -> PivotedQR:
    """
    Extend a rank-k decomposition to all n pivoted columns.

    The trailing columns M[:, J[k:]] are projected off range(Q) (twice) and
    factored by unpivoted Householder QR, so R's trailing blocks carry the
    residual norms for every split index.
    """
    M = as_dense(M)
    m, n = M.shape
    k = dec.k
    if k >= n:
        return dec
    if dec.Q.shape[1] != k:
        raise DimensionError(f"completing a rank-{k} factorization needs its m x {k} Q, got {dec.Q.shape}")
    rest = M[:, dec.J[k:]]
    Q = dec.Q
    B = Q.T @ rest
    residual = rest - Q @ B
    correction = Q.T @ residual
    residual -= Q @ correction
    B += correction
    Q2, R2 = householder_qr(residual)

    R = np.zeros((n, n), order="F")
    R[:k, :] = dec.R
    R[:k, k:] = B
    R[k:, k:] = R2
    return PivotedQR(Q=np.asfortranarray(np.hstack([Q, Q2])), R=R, J=dec.J, k=n)


def diag_ratio_bounds(n: int) -> Tuple[float, float]:
    """Range of |R[k, k]| / sigma_k(M) achievable by max-norm pivoting on n columns."""
    return 1.0 / math.sqrt(n * (n + 1) / 2.0), 2.0 ** (n - 1)


def pivot_quality(
    M: DenseMatrix,
    out_ref: PivotedQR,
    out_test: PivotedQR,
    sigma: Optional[np.ndarray] = None,
) -> PivotQualityCurves:
    """
    Trailing-norm and diagonal-ratio curves of two decompositions of M.

    Args:
        M: The factored matrix
        out_ref: Reference decomposition (typically exact max-norm QRCP)
        out_test: Decomposition under test
        sigma: Singular values of M when already known

    Returns:
        PivotQualityCurves for k = 1..n
    """
    M = as_dense(M)
    n = M.shape[1]
    if sigma is None:
        sigma = svd_values(M)
    sigma = np.asarray(sigma, dtype=np.float64)[:n]

    ref = complete_factorization(M, out_ref)
    test = complete_factorization(M, out_test)

    ks = np.arange(1, n + 1)
    trailing = safe_ratio(trailing_norms(ref.R)[1:], trailing_norms(test.R)[1:])
    diag_ref = safe_ratio(np.abs(np.diag(ref.R)), sigma)
    diag_test = safe_ratio(np.abs(np.diag(test.R)), sigma)

    logger.debug(f"pivot quality n={n}: trailing ratio in [{trailing.min():.3f}, {trailing.max():.3f}]")
    return PivotQualityCurves(
        ks=ks.tolist(),
        trailing_ratio=trailing.tolist(),
        diag_ratio_ref=diag_ref.tolist(),
        diag_ratio_test=diag_test.tolist(),
    )
