"""Subspace geometry: leverage scores, coherence and embedding distortion."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..config import UNIT_ROUNDOFF
from ..linalg import DenseMatrix, as_dense, orthonormal_basis, svd_values
from ..logging import get_logger
from .operators import SketchOperator

logger = get_logger(__name__)

Sketch = Union[SketchOperator, np.ndarray]


@dataclass(frozen=True)
class SubspaceDiagnostics:
    """How well a sketch embeds a subspace.

    ``restricted_singular_values`` are the singular values of S U for an
    orthonormal basis U of the subspace, padded with zeros when S U has
    fewer rows than U has columns.
    """

    distortion: float
    effective_distortion: float
    restricted_singular_values: np.ndarray
    restricted_cond: float


def leverage_scores(M: DenseMatrix) -> np.ndarray:
    """Squared row norms of an orthonormal basis for range(M)."""
    U = orthonormal_basis(as_dense(M))
    if U.shape[1] == 0:
        raise ValueError("leverage scores are undefined for a zero matrix")
    return np.einsum("ij,ij->i", U, U)


def coherence(M: DenseMatrix) -> float:
    """m times the largest leverage score."""
    scores = leverage_scores(M)
    return float(scores.size * scores.max())


def sketch_product(S: Sketch, X: DenseMatrix) -> DenseMatrix:
    """S X for an operator or a dense array."""
    if isinstance(S, SketchOperator):
        return S.apply(X)
    return np.asfortranarray(as_dense(S) @ X)


def diagnostics_from_product(SU: DenseMatrix, k: int) -> SubspaceDiagnostics:
    """
    Diagnostics from an already-formed product S U.

    Args:
        SU: Sketch of an orthonormal basis
        k: Subspace dimension (columns of U)
    """
    SU = as_dense(SU)
    if k == 0:
        return SubspaceDiagnostics(0.0, 0.0, np.zeros(0), 1.0)
    sigma = svd_values(SU)
    if sigma.size < k:
        sigma = np.concatenate([sigma, np.zeros(k - sigma.size)])
    smax, smin = float(sigma[0]), float(sigma[-1])

    distortion = min(1.0, max(0.0, smax - 1.0, 1.0 - smin))
    if smax == 0.0 or smin <= max(SU.shape) * UNIT_ROUNDOFF * smax:
        return SubspaceDiagnostics(distortion, 1.0, sigma, float("inf"))
    kappa = smax / smin
    effective = (kappa - 1.0) / (kappa + 1.0)
    return SubspaceDiagnostics(distortion, effective, sigma, kappa)


def diagnostics(S: Sketch, M: DenseMatrix) -> SubspaceDiagnostics:
    """
    Distortion and restricted conditioning of S on range(M).

    S may be a SketchOperator or any dense array with M.shape[0] columns.
    """
    U = orthonormal_basis(as_dense(M))
    result = diagnostics_from_product(sketch_product(S, U), U.shape[1])
    logger.debug(
        f"subspace dim {U.shape[1]}: delta={result.distortion:.3e}, "
        f"delta_eff={result.effective_distortion:.3e}, kappa={result.restricted_cond:.3e}"
    )
    return result
