"""Two-stage numerical rank selection.

Stage 1 truncates the sketch's R factor where its trailing Frobenius mass
drops to roundoff relative to its largest entry. Stage 2 preconditions the
surviving columns, runs CholeskyQR (shrinking on Cholesky failure) and keeps
the largest leading block whose estimated condition number stays below
sqrt(eps_tol / u).
"""

import math
import time
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

import numpy as np

from ..config import MAX_CHOLESKY_RETRIES, POWER_ITERATION_CAP, UNIT_ROUNDOFF, UPPER_BOUND_INFLATION
from ..linalg import DenseMatrix, as_dense, estimate_operator_norm, estimate_spectral_norm, inverse_norm, trsm_right
from ..logging import get_logger
from .cholqr import cholesky_qr
from .models import CondMethod

logger = get_logger(__name__)

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class CondBound:
    """A condition-number bound and whether it bounds from below or above."""

    value: float
    direction: str


@dataclass(frozen=True)
class Stage2Result:
    k: int
    R_pre: DenseMatrix
    Q: DenseMatrix
    k0: int
    retries: int
    cond: float
    timings: Dict[str, float] = field(default_factory=dict)


def trailing_norms(R: DenseMatrix) -> np.ndarray:
    """
    ||C_l||_F for l = 0..k of a k x n upper-trapezoidal R.

    Row i of C_l (i >= l) is the whole of row i, so the masses are bottom-up
    cumulative sums of squared row norms.
    """
    R = as_dense(R)
    k = R.shape[0]
    scale = np.abs(R).max() if R.size else 0.0
    if scale == 0.0:
        return np.zeros(k + 1)
    rows = np.einsum("ij,ij->i", R / scale, R / scale)
    mass = np.concatenate([np.cumsum(rows[::-1])[::-1], [0.0]])
    return scale * np.sqrt(mass)


def rank_stage1(R_sk: DenseMatrix, u: float = UNIT_ROUNDOFF) -> int:
    """Smallest l with ||C_l||_F <= u * max|R_sk|; 0 for a zero matrix."""
    norms = trailing_norms(R_sk)
    if norms[0] == 0.0:
        return 0
    scale = np.abs(R_sk).max()
    k0 = int(np.argmax(norms <= u * scale))
    logger.debug(f"stage 1: k0={k0} of {R_sk.shape[0]}")
    return k0


def _triangular_cond_upper(X: np.ndarray) -> float:
    top = estimate_spectral_norm(X, cap=POWER_ITERATION_CAP, tol=0.0)
    bottom = inverse_norm(X)
    return top.value * bottom.value * (1.0 + UPPER_BOUND_INFLATION) ** 2


def cond_estimate(X: DenseMatrix, method: Union[CondMethod, str] = CondMethod.IDENTITY_DEVIATION) -> CondBound:
    """
    Bound cond_2 of a square upper-triangular X.

    diag_ratio gives a lower bound; krylov_bounds and identity_deviation give
    upper bounds. identity_deviation measures tau = ||I - X / nu||_2 with nu
    the mean diagonal magnitude and returns +inf once tau >= 1.
    """
    X = as_dense(X)
    method = CondMethod(method)
    n = X.shape[0]
    if n == 0:
        return CondBound(1.0, LOWER if method is CondMethod.DIAG_RATIO else UPPER)
    diag = np.abs(np.diag(X))

    if method is CondMethod.DIAG_RATIO:
        if diag.min() == 0.0:
            return CondBound(math.inf, LOWER)
        return CondBound(float(diag.max() / diag.min()), LOWER)

    if diag.min() == 0.0:
        return CondBound(math.inf, UPPER)

    if method is CondMethod.KRYLOV_BOUNDS:
        return CondBound(_triangular_cond_upper(X), UPPER)

    nu = diag.mean()
    E = np.eye(n) - X / nu
    tau = estimate_operator_norm(lambda v: E @ v, lambda w: E.T @ w, n, cap=POWER_ITERATION_CAP, tol=0.0).value
    tau *= 1.0 + UPPER_BOUND_INFLATION
    if tau >= 1.0:
        return CondBound(math.inf, UPPER)
    return CondBound((1.0 + tau) / (1.0 - tau), UPPER)


def _cond_for_selection(X: np.ndarray, method: CondMethod) -> float:
    bound = cond_estimate(X, method)
    if method is CondMethod.IDENTITY_DEVIATION and math.isinf(bound.value):
        bound = cond_estimate(X, CondMethod.KRYLOV_BOUNDS)
    return bound.value


def select_rank(R_pre: DenseMatrix, threshold: float, method: CondMethod) -> Tuple[int, float]:
    """
    Largest l with the running-max condition estimate of R_pre[:l, :l] <= threshold.

    Probes are binary-search points; each probe's value is the max over its
    own estimate and every smaller probe's, so the predicate is monotone.

    Returns:
        (l, estimate at l)
    """
    k0 = R_pre.shape[0]
    probes: Dict[int, float] = {}

    def estimate(ell: int) -> float:
        raw = _cond_for_selection(R_pre[:ell, :ell], method)
        smaller = [value for size, value in probes.items() if size < ell]
        probes[ell] = max([raw] + smaller)
        logger.debug(f"stage 2 probe l={ell}: cond <= {probes[ell]:.3e}")
        return probes[ell]

    if k0 == 0:
        return 0, 1.0
    full = estimate(k0)
    if full <= threshold:
        return k0, full
    lo, hi = 0, k0
    lo_value = 1.0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        value = estimate(mid)
        if value <= threshold:
            lo, lo_value = mid, value
        else:
            hi = mid
    return lo, lo_value


def rank_stage2(
    M_k0: DenseMatrix,
    A_sk: DenseMatrix,
    eps_tol: float,
    u: float = UNIT_ROUNDOFF,
    method: Union[CondMethod, str] = CondMethod.IDENTITY_DEVIATION,
    max_retries: int = MAX_CHOLESKY_RETRIES,
) -> Stage2Result:
    """
    Precondition, CholeskyQR and pick the final rank.

    Args:
        M_k0: The k0 pivoted columns of M
        A_sk: Leading k0 x k0 block of the sketch's R factor
        eps_tol: Orthogonality-loss tolerance
        u: Unit roundoff
        method: Condition bound used by the rank search
        max_retries: Cholesky failures that shrink k0 and retry

    Returns:
        Stage2Result with k, the k x k R_pre and the m x k Q
    """
    method = CondMethod(method)
    M_k0 = as_dense(M_k0)
    m = M_k0.shape[0]
    timings: Dict[str, float] = {}

    start = time.perf_counter()
    M_pre = trsm_right(M_k0, A_sk)
    timings["precondition"] = time.perf_counter() - start

    start = time.perf_counter()
    k0 = M_pre.shape[1]
    retries = 0
    R_pre = np.zeros((0, 0), order="F")
    while k0 > 0:
        result = cholesky_qr(M_pre[:, :k0])
        if result.ok:
            R_pre = result.R
            break
        shrunk = result.info - 1
        logger.warning(f"Cholesky failed at minor {result.info}; shrinking k0 from {k0} to {shrunk}")
        if retries == max_retries:
            R_pre = result.R
            k0 = shrunk
            break
        k0 = shrunk
        retries += 1
    timings["cholqr"] = time.perf_counter() - start

    start = time.perf_counter()
    threshold = math.sqrt(eps_tol / u)
    k, cond = select_rank(R_pre, threshold, method)
    timings["rank"] = time.perf_counter() - start

    start = time.perf_counter()
    if k > 0:
        R_k = np.asfortranarray(R_pre[:k, :k])
        Q = trsm_right(M_pre[:, :k], R_k)
    else:
        R_k = np.zeros((0, 0), order="F")
        Q = np.zeros((m, 0), order="F")
    timings["cholqr"] += time.perf_counter() - start

    logger.info(f"stage 2: k={k} (k0={k0}, retries={retries}, cond<={cond:.3e}, threshold={threshold:.3e})")
    return Stage2Result(k=k, R_pre=R_k, Q=Q, k0=k0, retries=retries, cond=cond, timings=timings)
