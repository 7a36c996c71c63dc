"""The valid-decomposition contract for pivoted QR output."""

from typing import Optional

import numpy as np

from ..config import UNIT_ROUNDOFF
from ..linalg import DenseMatrix, as_dense
from ..logging import get_logger
from .models import PivotedQR, ValidationReport

logger = get_logger(__name__)


def orthogonality_loss(Q: DenseMatrix) -> float:
    """||Q^T Q - I||_2."""
    k = Q.shape[1]
    if k == 0:
        return 0.0
    return float(np.linalg.norm(Q.T @ Q - np.eye(k), 2))


def reconstruction_error(dec: PivotedQR, M: DenseMatrix) -> float:
    """||M[:, J] - Q R||_F relative to ||M||_F (absolute when M is zero)."""
    residual = np.linalg.norm(M[:, dec.J] - dec.Q @ dec.R, "fro")
    scale = np.linalg.norm(M, "fro")
    return float(residual / scale) if scale > 0.0 else float(residual)


def validate(dec: PivotedQR, M: DenseMatrix, tol: Optional[float] = None) -> ValidationReport:
    """
    Check orthogonality, reconstruction, triangularity and the permutation.

    Args:
        dec: Decomposition to check
        M: Matrix it claims to factor
        tol: Bound for both measured errors (default 100 * n * u)

    Returns:
        ValidationReport with measured values and the names of failed checks
    """
    M = as_dense(M)
    m, n = M.shape
    if tol is None:
        tol = 100.0 * max(n, 1) * UNIT_ROUNDOFF

    J = np.asarray(dec.J)
    permutation = J.shape == (n,) and np.array_equal(np.sort(J), np.arange(n))
    shapes_ok = dec.Q.shape == (m, dec.k) and dec.R.shape == (dec.k, n)
    triangular = shapes_ok and not np.any(np.tril(dec.R, -1))

    loss = orthogonality_loss(dec.Q) if shapes_ok else float("inf")
    recon = reconstruction_error(dec, M) if shapes_ok and permutation else float("inf")

    failures = []
    if not permutation:
        failures.append("permutation")
    if not triangular:
        failures.append("triangularity")
    if loss > tol:
        failures.append("orthogonality")
    if recon > tol:
        failures.append("reconstruction")
    if failures:
        logger.warning(f"validation failed ({', '.join(failures)}): loss={loss:.3e}, recon={recon:.3e}, tol={tol:.3e}")

    return ValidationReport(
        orthogonality_loss=loss,
        reconstruction_error=recon,
        triangular=bool(triangular),
        permutation=bool(permutation),
        tol=tol,
        failures=failures,
    )
