"""CQRRPT end to end: CholeskyQR, two-stage rank selection and the flop model."""

from .cholqr import CholeskyQRResult, cholesky_qr, cholesky_qr2
from .cqrrpt import cqrrpt, cqrrpt_core
from .flops import flop_breakdown, flop_model, sketch_flops
from .models import CondMethod, CqrrptConfig, CqrrptDiagnostics, CqrrptOutput
from .rank import CondBound, Stage2Result, cond_estimate, rank_stage1, rank_stage2, select_rank, trailing_norms

__all__ = [
    "CholeskyQRResult",
    "cholesky_qr",
    "cholesky_qr2",
    "cqrrpt",
    "cqrrpt_core",
    "flop_breakdown",
    "flop_model",
    "sketch_flops",
    "CondMethod",
    "CqrrptConfig",
    "CqrrptDiagnostics",
    "CqrrptOutput",
    "CondBound",
    "Stage2Result",
    "cond_estimate",
    "rank_stage1",
    "rank_stage2",
    "select_rank",
    "trailing_norms",
]
