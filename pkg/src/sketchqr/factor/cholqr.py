"""CholeskyQR and CholeskyQR2."""

from dataclasses import dataclass
from typing import Optional

from ..errors import DimensionError
from ..linalg import DenseMatrix, as_dense, cholesky, gram, trsm_right
from ..logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CholeskyQRResult:
    """Q and R of a CholeskyQR pass, or the Cholesky failure index.

    On failure ``Q`` is None and ``R`` holds the valid leading factor of
    order info - 1.
    """

    Q: Optional[DenseMatrix]
    R: DenseMatrix
    info: int = 0

    @property
    def ok(self) -> bool:
        return self.info == 0


def cholesky_qr(M: DenseMatrix) -> CholeskyQRResult:
    """
    Q R = M through the Gram matrix: G = M^T M, G = R^T R, Q = M R^{-1}.

    Returns:
        CholeskyQRResult; info is the 1-based failing leading minor of G
    """
    M = as_dense(M)
    if M.shape[0] < M.shape[1]:
        raise DimensionError(f"cholesky_qr needs rows >= cols, got {M.shape}")
    factor = cholesky(gram(M))
    if not factor.ok:
        return CholeskyQRResult(Q=None, R=factor.leading, info=factor.info)
    return CholeskyQRResult(Q=trsm_right(M, factor.R), R=factor.R)


def cholesky_qr2(M: DenseMatrix) -> CholeskyQRResult:
    """CholeskyQR run twice; R = R2 R1."""
    first = cholesky_qr(M)
    if not first.ok:
        return first
    second = cholesky_qr(first.Q)
    if not second.ok:
        logger.warning(f"cholesky_qr2: second pass failed at minor {second.info}")
        return CholeskyQRResult(Q=None, R=first.R, info=second.info)
    return CholeskyQRResult(Q=second.Q, R=second.R @ first.R)
