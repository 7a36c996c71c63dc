"""Request models for the CLI subcommands."""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..config import DEFAULT_EPS_TOL, DEFAULT_FAMILY, DEFAULT_GAMMA, DEFAULT_NNZ, DEFAULT_PROFILE_REPEATS
from ..factor import CondMethod
from ..sketching import SketchFamily
from ..testmat import GENERATORS

CHECK_NAMES = (
    "correctness",
    "spectrum-map",
    "preconditioner-cond",
    "stability-split",
    "rank-detection",
    "pivot-quality-low",
    "pivot-quality-high",
    "rrqr-inheritance",
    "maxnorm-similarity",
    "pivot-equivalence",
    "flop-model",
    "sketch-structure",
)


class MatrixRequest(BaseModel):
    """Which generated matrix to use."""

    matrix: str = Field(..., description="Generator name")
    m: int = Field(..., ge=1, description="Rows")
    seed: int = Field(default=0, ge=0, description="Base seed for the matrix and the sketch")
    cond: Optional[float] = Field(default=None, ge=1.0, description="Target condition number (polynomial decay)")
    scale: Optional[float] = Field(default=None, gt=0.0, description="Row scaling (high coherence)")
    theta: Optional[float] = Field(default=None, description="Kahan angle")
    rank: Optional[int] = Field(default=None, ge=0, description="Rank (exact-rank)")
    cache_dir: Optional[Path] = Field(default=None, description="Matrix cache directory")
    use_cache: bool = Field(default=True, description="Read and write the matrix cache")

    @field_validator("matrix")
    @classmethod
    def _known_matrix(cls, value: str) -> str:
        if value not in GENERATORS:
            raise ValueError(f"unknown matrix family '{value}'; choose from {', '.join(GENERATORS)}")
        return value

    def generator_params(self) -> Dict[str, Any]:
        """Family parameters that were given."""
        params = {"cond": self.cond, "scale": self.scale, "theta": self.theta, "rank": self.rank}
        return {key: value for key, value in params.items() if value is not None}


class SketchRequest(BaseModel):
    """Sketch settings shared by the factorizing subcommands."""

    gamma: float = Field(default=DEFAULT_GAMMA, ge=1.0, description="Sketch size factor")
    family: SketchFamily = Field(default=SketchFamily(DEFAULT_FAMILY), description="Sketch family")
    nnz: int = Field(default=DEFAULT_NNZ, ge=1, description="Nonzeros per SASO column")


class PivotQualityRequest(MatrixRequest, SketchRequest):
    """Request for the pivot-quality experiment."""

    n: int = Field(..., ge=1, description="Columns")
    trials: int = Field(default=1, ge=1, description="Independent seeded trials, seeds seed..seed+trials-1")
    workers: int = Field(default=1, ge=1, description="Worker threads for trials")
    reference: Literal["maxnorm", "geqp3"] = Field(
        default="maxnorm", description="Reference QRCP: the Householder loop or LAPACK's blocked xGEQP3"
    )

    @model_validator(mode="after")
    def _tall(self) -> "PivotQualityRequest":
        if self.m < self.n:
            raise ValueError(f"matrix must be tall, got {self.m}x{self.n}")
        return self


class ProfileRequest(MatrixRequest, SketchRequest):
    """Request for the phase-profiling experiment."""

    n: List[int] = Field(..., min_length=1, description="Column counts to profile at fixed m")
    repeats: int = Field(default=DEFAULT_PROFILE_REPEATS, ge=1, description="Runs per size; the best is kept")

    @model_validator(mode="after")
    def _tall(self) -> "ProfileRequest":
        for n in self.n:
            if n < 1 or self.m < n:
                raise ValueError(f"matrix must be tall, got {self.m}x{n}")
        return self


class VerifyRequest(BaseModel):
    """Request for the verification suite."""

    only: Optional[List[str]] = Field(default=None, description="Run only these checks")
    trials: Optional[int] = Field(default=None, ge=1, description="Trial count replacing each check's default")
    seed: int = Field(default=0, ge=0, description="Base seed")
    workers: int = Field(default=1, ge=1, description="Worker threads for trials")

    @field_validator("only")
    @classmethod
    def _known_checks(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return value
        unknown = [name for name in value if name not in CHECK_NAMES]
        if unknown:
            raise ValueError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECK_NAMES)}")
        return value


class GenRequest(MatrixRequest):
    """Request for dumping a generated matrix."""

    n: int = Field(..., ge=1, description="Columns")
    output: Path = Field(..., description="Matrix Market destination")
    coordinate: bool = Field(default=False, description="Write the coordinate layout")
    sigma_output: Optional[Path] = Field(default=None, description="Where to write known singular values")

    @model_validator(mode="after")
    def _tall(self) -> "GenRequest":
        if self.m < self.n:
            raise ValueError(f"matrix must be tall, got {self.m}x{self.n}")
        return self


class FactorRequest(SketchRequest):
    """Request for factoring a Matrix Market file."""

    input: Path = Field(..., description="Matrix Market input")
    prefix: Path = Field(..., description="Output prefix for Q, R, J and diagnostics")
    seed: int = Field(default=0, ge=0, description="Sketch seed")
    eps_tol: float = Field(default=DEFAULT_EPS_TOL, description="Orthogonality-loss tolerance")
    cond_method: CondMethod = Field(default=CondMethod.IDENTITY_DEVIATION, description="Stage-2 condition bound")

    @field_validator("input")
    @classmethod
    def _exists(cls, value: Path) -> Path:
        if not value.is_file():
            raise ValueError(f"input file not found: {value}")
        return value
