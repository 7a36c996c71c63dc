"""Column-major matrix carrier and R-factor partitions."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError

DenseMatrix = npt.NDArray[np.float64]


def as_dense(data: Any, *, allow_nonfinite: bool = False, copy: bool = False) -> DenseMatrix:
    """
    Coerce input to a float64, Fortran-ordered 2-D array.

    Args:
        data: Anything numpy can turn into a 2-D array
        allow_nonfinite: Skip the finiteness check
        copy: Always return a fresh array

    Returns:
        Column-major float64 matrix
    """
    arr = np.asfortranarray(np.asarray(data, dtype=np.float64))
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got array with shape {arr.shape}")
    if not allow_nonfinite and not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    if copy:
        arr = arr.copy(order="F")
    return arr


@dataclass(frozen=True)
class TriangularPartition:
    """The (A, B, C) blocks of a k x n upper-trapezoidal R split after row/column ell.

        R = [ A  B ]
            [ 0  C ]

    with A ell x ell upper-triangular, B ell x (n - ell), C (k - ell) x (n - ell).
    All three are views into ``source``.
    """

    source: DenseMatrix
    ell: int

    def __post_init__(self) -> None:
        k, n = self.source.shape
        if not 1 <= self.ell <= min(k, n):
            raise DimensionError(f"split index {self.ell} outside [1, {min(k, n)}]")

    @property
    def A(self) -> DenseMatrix:
        return self.source[: self.ell, : self.ell]

    @property
    def B(self) -> DenseMatrix:
        return self.source[: self.ell, self.ell :]

    @property
    def C(self) -> DenseMatrix:
        return self.source[self.ell :, self.ell :]

    def stack(self) -> DenseMatrix:
        """Reassemble [A B; 0 C]."""
        k, n = self.source.shape
        out = np.zeros((k, n), dtype=np.float64, order="F")
        out[: self.ell, : self.ell] = self.A
        out[: self.ell, self.ell :] = self.B
        out[self.ell :, self.ell :] = self.C
        return out
