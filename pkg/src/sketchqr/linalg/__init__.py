"""Dense kernels: QR, Cholesky, triangular solves, Gram products, SVD and norm estimators."""

from .dense import DenseMatrix, TriangularPartition, as_dense
from .kernels import (
    CholeskyResult,
    cholesky,
    gram,
    householder_qr,
    numerical_rank,
    orthonormal_basis,
    trsm_right,
)
from .mmio import read_matrix_market, write_matrix_market
from .spectral import (
    NormEstimate,
    cond_2,
    estimate_operator_norm,
    estimate_spectral_norm,
    inverse_norm,
    spectral_norm,
    svd_values,
)

__all__ = [
    "DenseMatrix",
    "TriangularPartition",
    "as_dense",
    "CholeskyResult",
    "cholesky",
    "gram",
    "householder_qr",
    "numerical_rank",
    "orthonormal_basis",
    "trsm_right",
    "read_matrix_market",
    "write_matrix_market",
    "NormEstimate",
    "cond_2",
    "estimate_operator_norm",
    "estimate_spectral_norm",
    "inverse_norm",
    "spectral_norm",
    "svd_values",
]
