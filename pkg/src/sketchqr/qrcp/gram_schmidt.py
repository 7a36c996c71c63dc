"""Gram-Schmidt QRCP with explicit projection updates.

Exists as an oracle for the Householder variant: column norms are measured
exactly at every step instead of downdated, and the same pivot and stopping
rules apply.
"""

from typing import Optional

import numpy as np

from ..config import UNIT_ROUNDOFF
from ..linalg import DenseMatrix, as_dense
from ..logging import get_logger
from .householder import choose_pivot
from .models import PivotedQR

logger = get_logger(__name__)


def qrcp_gram_schmidt(
    M: DenseMatrix,
    rank_tol: Optional[float] = None,
    max_steps: Optional[int] = None,
) -> PivotedQR:
    """Modified Gram-Schmidt QRCP; B[:, i:] <- (I - q q^T) B[:, i:] after each pivot."""
    B = as_dense(M, copy=True)
    m, n = B.shape
    if rank_tol is None:
        rank_tol = n * UNIT_ROUNDOFF
    J = np.arange(n)
    limit = min(m, n) if max_steps is None else min(m, n, max_steps)

    Q = np.zeros((m, limit), order="F")
    R = np.zeros((limit, n), order="F")
    initial_max = float(np.linalg.norm(B, axis=0).max()) if n else 0.0
    stop = rank_tol * initial_max

    k = 0
    for i in range(limit):
        norms = np.linalg.norm(B[:, i:], axis=0)
        if initial_max == 0.0 or norms.max() <= stop:
            break
        p = i + choose_pivot(norms, J[i:], lambda pos: np.linalg.norm(B[:, i + pos], axis=0))
        if p != i:
            B[:, [i, p]] = B[:, [p, i]]
            R[:, [i, p]] = R[:, [p, i]]
            J[[i, p]] = J[[p, i]]

        r = np.linalg.norm(B[:, i])
        q = B[:, i] / r
        Q[:, i] = q
        R[i, i] = r
        if i + 1 < n:
            R[i, i + 1 :] = q @ B[:, i + 1 :]
            B[:, i + 1 :] -= np.outer(q, R[i, i + 1 :])
        B[:, i] = 0.0
        k = i + 1
        logger.debug(f"gram-schmidt step {i}: pivot column {J[i]}, norm {r:.3e}")

    return PivotedQR(Q=np.asfortranarray(Q[:, :k]), R=np.asfortranarray(R[:k, :]), J=J, k=k)
