"""Householder QR with max-norm column pivoting and norm downdating."""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import lapack, qr

from ..config import NORM_RECOMPUTE_THRESHOLD, PIVOT_TIE_TOL, UNIT_ROUNDOFF
from ..linalg import DenseMatrix, as_dense
from ..logging import get_logger
from .models import PivotedQR

logger = get_logger(__name__)

# Downdated norms within this relative distance of the maximum get recomputed
# exactly before the pivot is chosen.
TIE_WINDOW = 4.0 * math.sqrt(UNIT_ROUNDOFF)


def _reflector(x: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """
    Householder vector v (v[0] = 1), tau and beta with (I - tau v v^T) x = beta e_1.

    An already-reduced x gives tau = 0 so the column is left untouched.
    """
    v = np.zeros_like(x)
    v[0] = 1.0
    alpha = x[0]
    tail = np.linalg.norm(x[1:])
    if tail == 0.0:
        return v, 0.0, float(alpha)
    beta = -math.copysign(math.hypot(alpha, tail), alpha)
    v[1:] = x[1:] / (alpha - beta)
    tau = (beta - alpha) / beta
    return v, tau, beta


def choose_pivot(norms: np.ndarray, J: np.ndarray, exact: Callable[[np.ndarray], np.ndarray]) -> int:
    """
    Position of the column with the largest norm.

    Candidates whose working norm is within TIE_WINDOW of the maximum are
    re-measured with ``exact(positions)``; among those within PIVOT_TIE_TOL of
    the exact maximum the lowest original column index wins. ``norms`` is
    updated in place with the re-measured values.
    """
    top = norms.max()
    window = np.flatnonzero(norms >= top * (1.0 - TIE_WINDOW))
    if window.size == 1:
        return int(window[0])
    measured = exact(window)
    norms[window] = measured
    best = measured.max()
    winners = window[measured >= best * (1.0 - PIVOT_TIE_TOL)]
    return int(winners[np.argmin(J[winners])])


def _form_q(reflectors: List[Tuple[np.ndarray, float]], m: int) -> DenseMatrix:
    k = len(reflectors)
    if k == 0:
        return np.zeros((m, 0), order="F")
    V = np.zeros((m, k), order="F")
    tau = np.empty(k)
    for i, (v, t) in enumerate(reflectors):
        V[i:, i] = v
        tau[i] = t
    Q, _, info = lapack.dorgqr(V, tau)
    if info != 0:
        raise ValueError(f"dorgqr rejected argument {-info}")
    return np.asfortranarray(Q)


def qrcp_maxnorm(
    M: DenseMatrix,
    rank_tol: Optional[float] = None,
    max_steps: Optional[int] = None,
    form_q: bool = True,
) -> PivotedQR:
    """
    Householder QRCP choosing, at each step, the trailing column of largest norm.

    Column norms are downdated after every reflection and recomputed from
    scratch when the downdate would cancel below sqrt(u) of the last exact
    value. The process stops when the largest trailing norm falls to
    rank_tol times the largest initial column norm.

    Args:
        M: m x n matrix
        rank_tol: Relative stopping tolerance (default n * u)
        max_steps: Optional cap on the number of pivots taken
        form_q: Accumulate Q; when False, Q is an m x 0 placeholder and only
            R and J are meaningful

    Returns:
        PivotedQR with k = number of steps completed
    """
    A = as_dense(M, copy=True)
    m, n = A.shape
    if rank_tol is None:
        rank_tol = n * UNIT_ROUNDOFF
    J = np.arange(n)
    limit = min(m, n) if max_steps is None else min(m, n, max_steps)

    vn1 = np.linalg.norm(A, axis=0) if n else np.zeros(0)
    vn2 = vn1.copy()
    initial_max = float(vn1.max()) if n else 0.0
    stop = rank_tol * initial_max

    reflectors: List[Tuple[np.ndarray, float]] = []
    recomputed = 0
    for i in range(limit):
        trailing = vn1[i:]
        if initial_max == 0.0 or trailing.max() <= stop:
            break

        def measure(pos: np.ndarray) -> np.ndarray:
            exact = np.linalg.norm(A[i:, i + pos], axis=0)
            vn2[i + pos] = exact
            return exact

        p = i + choose_pivot(trailing, J[i:], measure)
        if trailing.max() <= stop:
            break
        if p != i:
            A[:, [i, p]] = A[:, [p, i]]
            J[[i, p]] = J[[p, i]]
            vn1[[i, p]] = vn1[[p, i]]
            vn2[[i, p]] = vn2[[p, i]]

        v, tau, beta = _reflector(A[i:, i].copy())
        if tau != 0.0 and i + 1 < n:
            block = A[i:, i + 1 :]
            block -= tau * np.outer(v, v @ block)
        A[i, i] = beta
        A[i + 1 :, i] = 0.0
        reflectors.append((v, tau))

        # Downdate trailing norms
        cols = np.arange(i + 1, n)
        live = cols[vn1[cols] != 0.0]
        if live.size:
            ratio = np.abs(A[i, live]) / vn1[live]
            temp = np.maximum(0.0, 1.0 - ratio * ratio)
            temp2 = temp * (vn1[live] / vn2[live]) ** 2
            redo = temp2 <= NORM_RECOMPUTE_THRESHOLD
            keep = live[~redo]
            vn1[keep] *= np.sqrt(temp[~redo])
            fresh = live[redo]
            if fresh.size:
                vn1[fresh] = np.linalg.norm(A[i + 1 :, fresh], axis=0) if i + 1 < m else 0.0
                vn2[fresh] = vn1[fresh]
                recomputed += fresh.size
        logger.debug(f"step {i}: pivot column {J[i]}, |R[i,i]|={abs(beta):.3e}")

    k = len(reflectors)
    logger.debug(f"qrcp_maxnorm {m}x{n}: k={k}, {recomputed} norm recomputations")
    Q = _form_q(reflectors, m) if form_q else np.zeros((m, 0), order="F")
    R = np.asfortranarray(np.triu(A[:k, :]))
    return PivotedQR(Q=Q, R=R, J=J, k=k)


def qrcp_geqp3(M: DenseMatrix) -> PivotedQR:
    """
    Complete max-norm QRCP through LAPACK's blocked xGEQP3, R factor only.

    Pivots follow the same largest-trailing-norm rule as qrcp_maxnorm; exact
    ties are broken by position in the partially permuted matrix rather than
    by original index. k = min(m, n) and Q is an m x 0 placeholder, so the
    result serves as a reference R for every split index.
    """
    A = as_dense(M)
    m, n = A.shape
    if min(m, n) == 0:
        return PivotedQR(Q=np.zeros((m, 0), order="F"), R=np.zeros((0, n), order="F"), J=np.arange(n), k=0)
    R, J = qr(A, mode="r", pivoting=True)
    k = min(m, n)
    logger.debug(f"qrcp_geqp3 {m}x{n}: |R[0, 0]|={abs(R[0, 0]):.3e}, |R[k-1, k-1]|={abs(R[k - 1, k - 1]):.3e}")
    return PivotedQR(Q=np.zeros((m, 0), order="F"), R=np.asfortranarray(R[:k]), J=np.asarray(J, dtype=np.intp), k=k)
