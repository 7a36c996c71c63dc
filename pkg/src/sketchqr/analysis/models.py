"""Report types for the verification checks."""

from typing import List

from pydantic import BaseModel, Field


class RrqrReport(BaseModel):
    """RRQR factors of an R factor against the singular values of its matrix, per split index."""

    ells: List[int] = Field(..., description="Split indices 1..k")
    f_lower: List[float] = Field(..., description="max_j sigma_j(M) / sigma_j(A_l)")
    f_upper: List[float] = Field(..., description="max_j sigma_j(C_l) / sigma_{l+j}(M); 1 when empty")
    g: List[float] = Field(..., description="||A_l^{-1} B_l||_2; 0 when B_l is empty")
    budget: List[float] = Field(..., description="sqrt(1 + 4 l (n - l)) overlay")

    @property
    def f(self) -> List[float]:
        return [max(lo, up) for lo, up in zip(self.f_lower, self.f_upper)]


class InheritanceReport(BaseModel):
    """Whether R-factor bounds carry over from a sketch to the matrix, per split index."""

    ells: List[int]
    effective_distortion: float
    slack_lower: List[float] = Field(..., description="Worst margin of the leading-block bound")
    slack_upper: List[float] = Field(..., description="Worst margin of the trailing-block bound")
    slack_coupling: List[float] = Field(..., description="Margin of the ||A^{-1} B|| bound")
    tol: float

    @property
    def passed(self) -> bool:
        slacks = self.slack_lower + self.slack_upper + self.slack_coupling
        return all(s >= -self.tol for s in slacks)

    @property
    def min_slack(self) -> float:
        return min(self.slack_lower + self.slack_upper + self.slack_coupling, default=0.0)


class SimilarityReport(BaseModel):
    """How close the sketched max-norm pivot is to the exact one after ell common pivots."""

    ell: int
    pivot: int = Field(..., description="Column the exact rule picks")
    sketched_pivot: int = Field(..., description="Column the rule picks on the sketch")
    phi_pivot: float
    phi_sketched_pivot: float
    sigma_bound: float = Field(..., description="sigma_[k-l+1] / sigma_1 of the restricted singular values")
    sharp_bound: float = Field(..., description="(1 - delta_l) / (1 + delta_l)")
    tol: float

    @property
    def slack_sigma(self) -> float:
        return self.phi_sketched_pivot - self.sigma_bound * self.phi_pivot

    @property
    def slack_sharp(self) -> float:
        return self.phi_sketched_pivot - self.sharp_bound * self.phi_pivot

    @property
    def passed(self) -> bool:
        margin = self.tol * self.phi_pivot
        return self.slack_sigma >= -margin and self.slack_sharp >= -margin


class PivotQualityCurves(BaseModel):
    """Pivot-quality metrics of a test decomposition against a reference, for k = 1..n."""

    ks: List[int]
    trailing_ratio: List[float] = Field(..., description="||C_k^ref||_F / ||C_k^test||_F")
    diag_ratio_ref: List[float] = Field(..., description="|R_ref[k, k]| / sigma_k(M)")
    diag_ratio_test: List[float] = Field(..., description="|R_test[k, k]| / sigma_k(M)")

    def trailing_within(self, lo: float, hi: float) -> bool:
        return all(lo <= r <= hi for r in self.trailing_ratio)
