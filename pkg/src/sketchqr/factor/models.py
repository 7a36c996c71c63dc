"""Configuration and output types for CQRRPT."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..config import DEFAULT_EPS_TOL, DEFAULT_FAMILY, DEFAULT_GAMMA, DEFAULT_NNZ, MAX_CHOLESKY_RETRIES, UNIT_ROUNDOFF
from ..linalg import DenseMatrix
from ..qrcp import PivotedQR, ValidationReport
from ..sketching import SketchFamily


class CondMethod(str, Enum):
    """How stage-2 rank selection bounds cond(R_pre[:l, :l])."""

    DIAG_RATIO = "diag_ratio"
    KRYLOV_BOUNDS = "krylov_bounds"
    IDENTITY_DEVIATION = "identity_deviation"


class CqrrptConfig(BaseModel):
    """Tuning knobs for a CQRRPT factorization."""

    gamma: float = Field(default=DEFAULT_GAMMA, ge=1.0, description="Sketch size factor, d = ceil(gamma * n)")
    family: SketchFamily = Field(default=SketchFamily(DEFAULT_FAMILY), description="Sketch distribution family")
    nnz: int = Field(default=DEFAULT_NNZ, ge=1, description="Nonzeros per sketch column (SASO only)")
    eps_tol: float = Field(default=DEFAULT_EPS_TOL, description="Orthogonality-loss tolerance for rank selection")
    cond_method: CondMethod = Field(default=CondMethod.IDENTITY_DEVIATION, description="Stage-2 condition bound")
    stage1_enabled: bool = Field(default=True, description="Truncate the sketch factor by trailing mass")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Seed of the sketching operator")
    rank_tol: Optional[float] = Field(default=None, gt=0.0, description="Sketch QRCP stop tolerance (default n*u)")
    measure_distortion: bool = Field(default=False, description="Measure the sketch's distortion on range(M)")
    validate_output: bool = Field(default=True, description="Check the valid-decomposition contract")
    max_cholesky_retries: int = Field(default=MAX_CHOLESKY_RETRIES, ge=0, description="Cholesky-failure fallbacks")

    model_config = {"frozen": True}

    @field_validator("eps_tol")
    @classmethod
    def _eps_tol_above_roundoff(cls, value: float) -> float:
        if not value > UNIT_ROUNDOFF:
            raise ValueError(f"eps_tol must exceed unit roundoff {UNIT_ROUNDOFF:.3e}, got {value}")
        return value


@dataclass(frozen=True)
class CqrrptDiagnostics:
    """Measurements collected while factorizing."""

    precond_cond: float = 1.0
    truncation_ratio: float = 0.0
    flops: float = 0.0
    cholesky_retries: int = 0
    sketch_steps: int = 0
    distortion: Optional[float] = None
    effective_distortion: Optional[float] = None
    timings: Dict[str, float] = field(default_factory=dict)
    validation: Optional[ValidationReport] = None


@dataclass(frozen=True)
class CqrrptOutput:
    """Factorization M[:, J] ~= Q_k R_k plus the intermediate factors.

    ``R_sk`` is the sketch's pivoted R factor and ``R_pre`` the k x k
    CholeskyQR factor of the preconditioned block.
    """

    factorization: PivotedQR
    k0: int
    k: int
    d: int
    R_sk: DenseMatrix
    R_pre: DenseMatrix
    diagnostics: CqrrptDiagnostics

    @property
    def Q(self) -> DenseMatrix:
        return self.factorization.Q

    @property
    def R(self) -> DenseMatrix:
        return self.factorization.R

    @property
    def J(self) -> np.ndarray:
        return self.factorization.J

    def to_record(self) -> Dict[str, Any]:
        """Flat key-value diagnostics."""
        diag = self.diagnostics
        m, n = self.factorization.shape
        record: Dict[str, Any] = {
            "m": m,
            "n": n,
            "d": self.d,
            "k0": self.k0,
            "k": self.k,
            "sketch_steps": diag.sketch_steps,
            "cholesky_retries": diag.cholesky_retries,
            "precond_cond": diag.precond_cond,
            "truncation_ratio": diag.truncation_ratio,
            "flops": diag.flops,
        }
        if diag.distortion is not None:
            record["distortion"] = diag.distortion
            record["effective_distortion"] = diag.effective_distortion
        if diag.validation is not None:
            record["orthogonality_loss"] = diag.validation.orthogonality_loss
            record["reconstruction_error"] = diag.validation.reconstruction_error
            record["valid"] = diag.validation.passed
        for phase, seconds in diag.timings.items():
            record[f"time_{phase}"] = seconds
        return record
