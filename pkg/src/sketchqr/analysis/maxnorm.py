"""Quasi-optimality of max-norm pivots chosen on a sketch."""

import numpy as np

from ..linalg import DenseMatrix, as_dense, numerical_rank, orthonormal_basis
from ..logging import get_logger
from ..qrcp import qrcp_maxnorm
from ..sketching import Sketch, diagnostics, diagnostics_from_product, sketch_product
from .models import SimilarityReport

logger = get_logger(__name__)

RANK_TOL = 1e-10
DEFAULT_SLACK = 1e-12


def _project_out(basis: np.ndarray, X: np.ndarray) -> np.ndarray:
    """(I - P) X for P the orthogonal projector onto range(basis); never forms P."""
    if basis.shape[1] == 0:
        return X.copy()
    return X - basis @ (basis.T @ X)


def maxnorm_similarity_check(M: DenseMatrix, S: Sketch, ell: int, tol: float = DEFAULT_SLACK) -> SimilarityReport:
    """
    Compare the (ell+1)-th max-norm pivot on M with the one picked on S M.

    The first ell pivots come from max-norm pivoting on M and are shared.
    Phi(j) = ||(I - P_{M_l}) M[:, j]||. The sketched pivot maximizes the same
    criterion on S M with S M_l. Two lower bounds on Phi(sketched) / Phi(exact)
    are evaluated: the ratio of the (k - l + 1)-th to the first restricted
    singular value of S on range(M), and (1 - delta_l) / (1 + delta_l) with
    delta_l the effective distortion of (I - P_{S M_l}) S on range((I - P_{M_l}) M).

    Args:
        M: m x n matrix
        S: Sketch of M's rows
        ell: Number of shared pivots, 0 <= ell < rank(M)
        tol: Slack relative to Phi at the exact pivot
    """
    M = as_dense(M)
    k = numerical_rank(M, RANK_TOL)
    if not 0 <= ell < k:
        raise ValueError(f"need 0 <= ell < rank(M) = {k}, got {ell}")

    J = qrcp_maxnorm(M, max_steps=ell, form_q=False).J[:ell] if ell else np.zeros(0, dtype=int)
    SM = sketch_product(S, M)

    basis = orthonormal_basis(M[:, J]) if ell else np.zeros((M.shape[0], 0))
    N = _project_out(basis, M)
    phi = np.linalg.norm(N, axis=0)

    basis_sk = orthonormal_basis(SM[:, J]) if ell else np.zeros((SM.shape[0], 0))
    phi_sk = np.linalg.norm(_project_out(basis_sk, SM), axis=0)

    pivot = int(np.argmax(phi))
    sketched_pivot = int(np.argmax(phi_sk))

    restricted = diagnostics(S, M).restricted_singular_values
    # Counting the pivot being chosen as number ell + 1, the bracketed index
    # k - (ell + 1) + 1 is the (k - ell)-th largest value.
    sigma_bound = float(restricted[k - ell - 1] / restricted[0]) if restricted[0] > 0.0 else 0.0

    U_N = orthonormal_basis(N)
    TU = _project_out(basis_sk, sketch_product(S, U_N))
    delta_ell = diagnostics_from_product(TU, U_N.shape[1]).effective_distortion
    sharp_bound = (1.0 - delta_ell) / (1.0 + delta_ell)

    report = SimilarityReport(
        ell=ell,
        pivot=pivot,
        sketched_pivot=sketched_pivot,
        phi_pivot=float(phi[pivot]),
        phi_sketched_pivot=float(phi[sketched_pivot]),
        sigma_bound=sigma_bound,
        sharp_bound=sharp_bound,
        tol=tol,
    )
    logger.debug(
        f"l={ell}: pivot {pivot} vs sketched {sketched_pivot}, "
        f"ratio={report.phi_sketched_pivot / report.phi_pivot:.3e}, bounds {sigma_bound:.3e}/{sharp_bound:.3e}"
    )
    return report
