"""Check that R-factor bounds of a sketch transfer to the matrix itself.

For a fixed pivot vector J, with R and R_sk the unpivoted R factors of
M[:, J] and (S M)[:, J] and rho = (1 - delta) / (1 + delta) for the
effective distortion delta of S on range(M):

    sigma_j(A_l) / sigma_j(M)         >= rho     sigma_j(A_l^sk) / sigma_j(SM)          j <= l
    sigma_j(C_l) / sigma_{l+j}(M)     <= 1/rho   sigma_j(C_l^sk) / sigma_{l+j}(SM)      j <= k - l
    ||A_l^{-1} B_l||                  <= ||(A_l^sk)^{-1} B_l^sk|| + (1/rho) ||C_l^sk|| / sigma_min(A_l^sk)
"""

import math

import numpy as np

from ..errors import RankMismatchError
from ..linalg import DenseMatrix, TriangularPartition, as_dense, householder_qr, numerical_rank, svd_values
from ..logging import get_logger
from ..sketching import Sketch, diagnostics, sketch_product
from .models import InheritanceReport
from .rrqr import coupling_norm

logger = get_logger(__name__)

RANK_TOL = 1e-10
DEFAULT_SLACK = 1e-9


def inheritance_check(M: DenseMatrix, S: Sketch, J: np.ndarray, tol: float = DEFAULT_SLACK) -> InheritanceReport:
    """
    Evaluate the three transfer bounds for l = 1..rank(M).

    Slacks are rhs - lhs for the lower bound on A_l, and the analogous
    margins for the other two; each bound holds when its slack >= -tol.

    Raises:
        RankMismatchError: the sketch loses rank on range(M)
    """
    M = as_dense(M)
    J = np.asarray(J)
    SM = sketch_product(S, M)
    k = numerical_rank(M, RANK_TOL)
    k_sk = numerical_rank(SM, RANK_TOL)
    if k != k_sk:
        raise RankMismatchError(f"rank(SM)={k_sk} differs from rank(M)={k}")

    delta = diagnostics(S, M).effective_distortion
    if delta >= 1.0:
        raise RankMismatchError("sketch has effective distortion 1 on range(M)")
    rho = (1.0 - delta) / (1.0 + delta)

    R = householder_qr(M[:, J])[1]
    R_sk = householder_qr(SM[:, J])[1]
    sigma = svd_values(M)
    sigma_sk = svd_values(SM)

    ells, lower, upper, coupling = [], [], [], []
    for ell in range(1, k + 1):
        part = TriangularPartition(R, ell)
        part_sk = TriangularPartition(R_sk, ell)

        sA = svd_values(part.A)
        sA_sk = svd_values(part_sk.A)
        lhs = sA / sigma[:ell]
        rhs = rho * sA_sk / sigma_sk[:ell]
        lower.append(float(np.min(lhs - rhs)))

        rows = k - ell
        if rows > 0:
            sC = svd_values(part.C)[:rows]
            sC_sk = svd_values(part_sk.C)[:rows]
            lhs = sC / sigma[ell : ell + rows]
            rhs = sC_sk / (rho * sigma_sk[ell : ell + rows])
            upper.append(float(np.min(rhs - lhs)))
        else:
            upper.append(0.0)

        c_sk = svd_values(part_sk.C)[0] if part_sk.C.size else 0.0
        smin = sA_sk[-1]
        bound = coupling_norm(part_sk) + (c_sk / smin / rho if smin > 0.0 else math.inf)
        value = coupling_norm(part)
        coupling.append(math.inf if math.isinf(bound) else float(bound - value) / max(1.0, bound))
        ells.append(ell)

    report = InheritanceReport(
        ells=ells,
        effective_distortion=delta,
        slack_lower=lower,
        slack_upper=upper,
        slack_coupling=coupling,
        tol=tol,
    )
    logger.debug(f"inheritance: k={k}, delta_eff={delta:.3e}, min slack={report.min_slack:.3e}")
    return report
