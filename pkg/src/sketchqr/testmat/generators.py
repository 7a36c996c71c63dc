"""Seeded test-matrix generators."""

import math
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from ..errors import SpectrumError
from ..linalg import DenseMatrix
from ..logging import get_logger
from .models import SpectrumKind, SpectrumSpec, TestMatrix

logger = get_logger(__name__)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _orthonormal(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Haar-distributed rows x cols matrix with orthonormal columns."""
    Q, R = sla.qr(rng.standard_normal((rows, cols)), mode="economic")
    signs = np.sign(np.diag(R))
    signs[signs == 0.0] = 1.0
    return Q * signs


def _check_shape(m: int, n: int) -> None:
    if n < 1 or m < n:
        raise SpectrumError(f"generator needs m >= n >= 1, got {m}x{n}")


def gen_spectral(m: int, n: int, spec: SpectrumSpec, seed: int = 0) -> DenseMatrix:
    """M = U diag(sigma) V^T with U, V from QR of seeded Gaussian matrices."""
    _check_shape(m, n)
    try:
        sigma = spec.singular_values(n)
    except ValueError as e:
        raise SpectrumError(str(e)) from e
    rng = _rng(seed)
    U = _orthonormal(rng, m, n)
    V = _orthonormal(rng, n, n)
    return np.asfortranarray((U * sigma) @ V.T)


def high_coherence_factor(
    m: int, n: int, scale: float = 1e10, seed: int = 0
) -> Tuple[DenseMatrix, np.random.Generator]:
    """Stacked identities with n random rows scaled, before rotation; plus the rotation stream."""
    _check_shape(m, n)
    copies = m // n
    rows = np.tile(np.arange(n), copies + 1)[:m]
    A = np.zeros((m, n), order="F")
    A[np.arange(m), rows] = 1.0
    rng = _rng(seed)
    scaled = rng.choice(m, size=n, replace=False)
    A[scaled] *= scale
    return A, rng


def gen_high_coherence(m: int, n: int, scale: float = 1e10, seed: int = 0, rotate: bool = True) -> DenseMatrix:
    """
    Stack floor(m/n) copies of I_n plus the first m - cn rows of I_n, scale n
    random rows by ``scale`` and right-multiply by a random orthogonal matrix.
    """
    A, rng = high_coherence_factor(m, n, scale, seed)
    if rotate:
        A = A @ _orthonormal(rng, n, n)
    return np.asfortranarray(A)


def gen_kahan(n: int, theta: float) -> DenseMatrix:
    """K = diag(1, s, ..., s^{n-1}) (I - c * strict upper ones), s = sin(theta), c = cos(theta)."""
    if n < 1:
        raise SpectrumError(f"Kahan matrix needs n >= 1, got {n}")
    if not 0.0 < theta < math.pi / 2:
        raise SpectrumError(f"Kahan angle must lie in (0, pi/2), got {theta}")
    s, c = math.sin(theta), math.cos(theta)
    K = np.eye(n) - c * np.triu(np.ones((n, n)), 1)
    return np.asfortranarray(s ** np.arange(n)[:, None] * K)


def gen_gaussian(m: int, n: int, seed: int = 0) -> DenseMatrix:
    return np.asfortranarray(_rng(seed).standard_normal((m, n)))


def gen_exact_rank(m: int, n: int, r: int, seed: int = 0) -> DenseMatrix:
    """A B with A m x r and B r x n standard Gaussian."""
    if not 0 <= r <= min(m, n):
        raise SpectrumError(f"rank {r} outside [0, {min(m, n)}]")
    rng = _rng(seed)
    A = rng.standard_normal((m, r))
    B = rng.standard_normal((r, n))
    return np.asfortranarray(A @ B)


def _spectral(kind: SpectrumKind) -> Callable[..., TestMatrix]:
    def build(m: int, n: int, seed: int, cond: float = 1e10, values: Optional[list] = None, **_: Any) -> TestMatrix:
        spec = SpectrumSpec(kind=kind, cond=cond, values=values)
        return TestMatrix(kind.value.replace("_", "-"), gen_spectral(m, n, spec, seed), spec.singular_values(n))

    return build


def _high_coherence(m: int, n: int, seed: int, scale: float = 1e10, rotate: bool = True, **_: Any) -> TestMatrix:
    A, _ = high_coherence_factor(m, n, scale, seed)
    # Columns of the unrotated factor are orthogonal, so their norms are the singular values
    sigma = np.sort(np.linalg.norm(A, axis=0))[::-1]
    return TestMatrix("high-coherence", gen_high_coherence(m, n, scale, seed, rotate), sigma)


def _kahan(m: int, n: int, seed: int, theta: float = 0.285, **_: Any) -> TestMatrix:
    K = gen_kahan(n, theta)
    if m > n:
        K = np.vstack([K, np.zeros((m - n, n))])
    return TestMatrix("kahan", np.asfortranarray(K))


def _gaussian(m: int, n: int, seed: int, **_: Any) -> TestMatrix:
    return TestMatrix("gaussian", gen_gaussian(m, n, seed))


def _exact_rank(m: int, n: int, seed: int, rank: int = 10, **_: Any) -> TestMatrix:
    return TestMatrix("exact-rank", gen_exact_rank(m, n, rank, seed))


GENERATORS: Dict[str, Callable[..., TestMatrix]] = {
    "polynomial-decay": _spectral(SpectrumKind.POLYNOMIAL_DECAY),
    "staircase": _spectral(SpectrumKind.STAIRCASE),
    "explicit-list": _spectral(SpectrumKind.EXPLICIT_LIST),
    "high-coherence": _high_coherence,
    "kahan": _kahan,
    "gaussian": _gaussian,
    "exact-rank": _exact_rank,
}


def gen_by_name(name: str, m: int, n: int, seed: int = 0, **params: Any) -> TestMatrix:
    """
    Build a registered test matrix.

    Args:
        name: One of GENERATORS
        m, n: Shape
        seed: Generator seed
        **params: Family parameters (cond, values, scale, rotate, theta, rank);
            parameters a family does not use are ignored

    Returns:
        TestMatrix with known singular values where the construction fixes them
    """
    if name not in GENERATORS:
        raise SpectrumError(f"unknown matrix family '{name}'; choose from {', '.join(GENERATORS)}")
    params = {key: value for key, value in params.items() if value is not None}
    result = GENERATORS[name](m, n, seed, **params)
    logger.debug(f"generated {name} {m}x{n} (seed={seed})")
    return result
