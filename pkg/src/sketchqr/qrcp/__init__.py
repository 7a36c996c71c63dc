"""Column-pivoted QR: max-norm Householder QRCP, its Gram-Schmidt oracle and validation."""

from .gram_schmidt import qrcp_gram_schmidt
from .householder import qrcp_geqp3, qrcp_maxnorm
from .models import PivotedQR, ValidationReport
from .validate import orthogonality_loss, reconstruction_error, validate

__all__ = [
    "qrcp_gram_schmidt",
    "qrcp_geqp3",
    "qrcp_maxnorm",
    "PivotedQR",
    "ValidationReport",
    "orthogonality_loss",
    "reconstruction_error",
    "validate",
]
