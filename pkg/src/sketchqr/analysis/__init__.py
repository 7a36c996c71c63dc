"""Numerical checks of rank-revealing and pivot-quality properties."""

from .inheritance import inheritance_check
from .maxnorm import maxnorm_similarity_check
from .models import InheritanceReport, PivotQualityCurves, RrqrReport, SimilarityReport
from .quality import complete_factorization, diag_ratio_bounds, pivot_quality
from .ratios import safe_ratio
from .rrqr import coupling_norm, gu_eisenstat_budget, rrqr_report

__all__ = [
    "inheritance_check",
    "maxnorm_similarity_check",
    "InheritanceReport",
    "PivotQualityCurves",
    "RrqrReport",
    "SimilarityReport",
    "complete_factorization",
    "diag_ratio_bounds",
    "pivot_quality",
    "safe_ratio",
    "coupling_norm",
    "gu_eisenstat_budget",
    "rrqr_report",
]
