"""Result types for pivoted QR."""

from dataclasses import dataclass
from typing import List

import numpy as np
from pydantic import BaseModel, Field

from ..linalg import DenseMatrix


@dataclass(frozen=True)
class PivotedQR:
    """A column-pivoted QR decomposition M[:, J] ~= Q R.

    Q is m x k with orthonormal columns, R is k x n upper-trapezoidal and
    J is a 0-based permutation of the n columns.
    """

    Q: DenseMatrix
    R: DenseMatrix
    J: np.ndarray
    k: int

    @property
    def shape(self):
        return (self.Q.shape[0], self.R.shape[1])


class ValidationReport(BaseModel):
    """Measured quantities of the valid-decomposition contract."""

    orthogonality_loss: float = Field(..., description="||Q^T Q - I||_2")
    reconstruction_error: float = Field(..., description="||M[:, J] - Q R||_F / ||M||_F")
    triangular: bool = Field(..., description="R is upper-trapezoidal")
    permutation: bool = Field(..., description="J is a permutation of 0..n-1")
    tol: float = Field(..., description="Tolerance both measured errors are compared against")
    failures: List[str] = Field(default_factory=list, description="Names of failed checks")

    @property
    def passed(self) -> bool:
        return not self.failures
