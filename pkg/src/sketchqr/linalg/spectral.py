"""Singular values and norm/condition estimators.

svd_values is a one-sided Jacobi SVD used as the verification oracle for
singular values. The estimators are power iterations with a fixed cap and
relative tolerance; they never raise on non-convergence.
"""

from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

import numpy as np
import scipy.linalg as sla

from ..config import JACOBI_MAX_SWEEPS, POWER_ITERATION_CAP, POWER_ITERATION_TOL, UNIT_ROUNDOFF
from ..errors import ConvergenceError, DimensionError
from ..logging import get_logger
from .dense import DenseMatrix, as_dense
from .kernels import householder_qr

logger = get_logger(__name__)

# Power iteration start vectors come from their own fixed stream so that
# estimates are reproducible and independent of any caller seed.
_START_VECTOR_SEED = 0x5EED

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class NormEstimate:
    """Result of a power iteration: the best (largest) iterate seen."""

    value: float
    iterations: int
    converged: bool


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Parallel ordering: n - 1 rounds (n even) of disjoint column pairs covering every pair once."""
    size = n + (n % 2)
    players = list(range(size))
    half = size // 2
    rounds = []
    for _ in range(size - 1):
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        keep = (p < n) & (q < n)
        lo = np.minimum(p[keep], q[keep])
        hi = np.maximum(p[keep], q[keep])
        rounds.append((lo, hi))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _one_sided_jacobi(W: np.ndarray, max_sweeps: int) -> Tuple[np.ndarray, np.ndarray]:
    """Orthogonalize the columns of square W in place; returns (W V, V)."""
    n = W.shape[1]
    V = np.eye(n, order="F")
    if n < 2:
        return W, V
    rounds = _round_robin(n)
    tol = max(n, 16) * UNIT_ROUNDOFF
    for sweep in range(max_sweeps):
        rotations = 0
        for p, q in rounds:
            wp = W[:, p]
            wq = W[:, q]
            alpha = np.einsum("ij,ij->j", wp, wp)
            beta = np.einsum("ij,ij->j", wq, wq)
            gamma = np.einsum("ij,ij->j", wp, wq)
            active = np.abs(gamma) > tol * np.sqrt(alpha * beta)
            if not np.any(active):
                continue
            p, q = p[active], q[active]
            wp, wq = wp[:, active], wq[:, active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]

            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0.0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t

            W[:, p] = c * wp - s * wq
            W[:, q] = s * wp + c * wq
            vp, vq = V[:, p], V[:, q]
            V[:, p] = c * vp - s * vq
            V[:, q] = s * vp + c * vq
            rotations += p.size
        logger.debug(f"Jacobi sweep {sweep + 1}: {rotations} rotations")
        if rotations == 0:
            return W, V
    raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps (n={n})")


def svd_values(
    M: DenseMatrix,
    vectors: bool = False,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> Union[np.ndarray, Tuple[DenseMatrix, np.ndarray, DenseMatrix]]:
    """
    Singular values of M in descending order.

    Tall inputs are first reduced to their square R factor; wide inputs are
    transposed. The square factor is then diagonalized by one-sided Jacobi.

    Args:
        M: Matrix of any shape
        vectors: Also return the singular vectors
        max_sweeps: Sweep budget before ConvergenceError

    Returns:
        sigma, or (U, sigma, Vt) with U m x p, Vt p x n, p = min(m, n).
        Columns of U belonging to zero singular values are zero.
    """
    M = as_dense(M)
    m, n = M.shape
    if m < n:
        out = svd_values(np.asfortranarray(M.T), vectors=vectors, max_sweeps=max_sweeps)
        if vectors:
            U, sigma, Vt = out
            return np.asfortranarray(Vt.T), sigma, np.asfortranarray(U.T)
        return out
    if n == 0:
        if vectors:
            return np.zeros((m, 0), order="F"), np.zeros(0), np.zeros((0, 0), order="F")
        return np.zeros(0)

    Q = None
    if m > n:
        Q, W = householder_qr(M)
        W = W.copy(order="F")
    else:
        W = M.copy(order="F")

    W, V = _one_sided_jacobi(W, max_sweeps)
    sigma = np.linalg.norm(W, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    if not vectors:
        return sigma

    W = W[:, order]
    V = V[:, order]
    U = np.zeros_like(W)
    nonzero = sigma > 0.0
    U[:, nonzero] = W[:, nonzero] / sigma[nonzero]
    if Q is not None:
        U = Q @ U
    return np.asfortranarray(U), sigma, np.asfortranarray(V.T)


def estimate_operator_norm(
    apply: Operator,
    apply_t: Operator,
    n: int,
    cap: int = POWER_ITERATION_CAP,
    tol: float = POWER_ITERATION_TOL,
) -> NormEstimate:
    """
    Power iteration on X^T X for an operator given by its products.

    Every iterate is a lower bound on ||X||_2; the largest one is returned.

    Args:
        apply: v -> X v
        apply_t: w -> X^T w
        n: Number of columns of X
        cap: Iteration cap
        tol: Relative change between iterates that counts as converged
    """
    if n == 0:
        return NormEstimate(0.0, 0, True)
    rng = np.random.Generator(np.random.Philox(_START_VECTOR_SEED))
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)

    best = 0.0
    previous = 0.0
    for it in range(1, cap + 1):
        y = apply(x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return NormEstimate(best, it, True)
        z = apply_t(y)
        nz = np.linalg.norm(z)
        estimate = float(nz / ny)
        best = max(best, estimate)
        if nz == 0.0 or abs(estimate - previous) <= tol * estimate:
            return NormEstimate(best, it, True)
        previous = estimate
        x = z / nz
    return NormEstimate(best, cap, False)


def estimate_spectral_norm(
    M: DenseMatrix,
    cap: int = POWER_ITERATION_CAP,
    tol: float = POWER_ITERATION_TOL,
) -> NormEstimate:
    """Power-iteration estimate of ||M||_2 with its convergence flag."""
    M = as_dense(M)
    return estimate_operator_norm(lambda v: M @ v, lambda w: M.T @ w, M.shape[1], cap, tol)


def spectral_norm(M: DenseMatrix) -> float:
    """Lower estimate of ||M||_2 within the power-iteration tolerance."""
    result = estimate_spectral_norm(M)
    if not result.converged:
        logger.warning(f"spectral_norm hit the iteration cap ({result.iterations}); returning best iterate")
    return result.value


def _is_upper_triangular(M: np.ndarray) -> bool:
    return M.shape[0] == M.shape[1] and not np.any(np.tril(M, -1))


def inverse_norm(T: DenseMatrix) -> NormEstimate:
    """Estimate ||T^{-1}||_2 for square upper-triangular T through triangular solves."""
    T = as_dense(T)
    n = T.shape[0]
    if np.any(np.diag(T) == 0.0):
        return NormEstimate(float("inf"), 0, True)
    return estimate_operator_norm(
        lambda v: sla.solve_triangular(T, v, lower=False, check_finite=False),
        lambda w: sla.solve_triangular(T, w, trans="T", lower=False, check_finite=False),
        n,
    )


def cond_2(M: DenseMatrix) -> float:
    """
    2-norm condition number of a full-column-rank matrix.

    Triangular input is used directly; anything else is reduced to its R
    factor first. Returns +inf when R has a zero diagonal entry.
    """
    M = as_dense(M)
    if M.shape[0] < M.shape[1]:
        raise DimensionError(f"cond_2 needs rows >= cols, got {M.shape}")
    T = M if _is_upper_triangular(M) else householder_qr(M)[1]
    if T.shape[1] == 0:
        return 1.0
    top = estimate_spectral_norm(T)
    bottom = inverse_norm(T)
    if not (top.converged and bottom.converged):
        logger.warning("cond_2: power iteration hit its cap; estimate may be low")
    return top.value * bottom.value
