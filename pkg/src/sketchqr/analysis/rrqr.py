"""RRQR and strong-RRQR factors of a given R factor."""

import math

import numpy as np
import scipy.linalg as sla

from ..linalg import DenseMatrix, TriangularPartition, as_dense, svd_values
from ..logging import get_logger
from .models import RrqrReport
from .ratios import safe_ratio

logger = get_logger(__name__)


def gu_eisenstat_budget(ell: int, n: int) -> float:
    """RRQR factor sqrt(1 + 4 l (n - l)) guaranteed by strong RRQR with tuning parameter 2."""
    return math.sqrt(1.0 + 4.0 * ell * (n - ell))


def coupling_norm(part: TriangularPartition) -> float:
    """||A_l^{-1} B_l||_2; 0 when B_l is empty, +inf when A_l is singular."""
    A, B = part.A, part.B
    if B.shape[1] == 0:
        return 0.0
    if np.any(np.diag(A) == 0.0):
        return math.inf
    X = sla.solve_triangular(A, B, lower=False, check_finite=False)
    return float(svd_values(X)[0])


def rrqr_report(R: DenseMatrix, sigma_M: np.ndarray) -> RrqrReport:
    """
    Evaluate f_lower, f_upper and g at every split of R.

    Args:
        R: k x n upper-trapezoidal factor of M[:, J]
        sigma_M: Singular values of M, descending, at least k of them

    Returns:
        RrqrReport over l = 1..k
    """
    R = as_dense(R)
    sigma_M = np.asarray(sigma_M, dtype=np.float64)
    k, n = R.shape
    if sigma_M.size < k:
        raise ValueError(f"need at least {k} singular values, got {sigma_M.size}")

    ells, f_lower, f_upper, g, budget = [], [], [], [], []
    for ell in range(1, min(k, n) + 1):
        part = TriangularPartition(R, ell)
        sA = svd_values(part.A)
        f_lower.append(float(safe_ratio(sigma_M[:ell], sA).max()))

        rows = min(k - ell, n - ell, sigma_M.size - ell)
        if rows > 0:
            sC = svd_values(part.C)[:rows]
            f_upper.append(float(safe_ratio(sC, sigma_M[ell : ell + rows]).max()))
        else:
            f_upper.append(1.0)

        g.append(coupling_norm(part))
        budget.append(gu_eisenstat_budget(ell, n))
        ells.append(ell)

    logger.debug(f"rrqr_report: k={k}, max f={max(f_lower + f_upper, default=1.0):.3e}")
    return RrqrReport(ells=ells, f_lower=f_lower, f_upper=f_upper, g=g, budget=budget)
