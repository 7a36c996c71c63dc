"""CQRRPT: pivots and preconditioner from a QRCP of a sketch, Q from CholeskyQR."""

import time
from typing import Dict, Optional, Union

import numpy as np

from ..config import UNIT_ROUNDOFF
from ..errors import DimensionError
from ..linalg import DenseMatrix, as_dense
from ..logging import get_logger
from ..qrcp import PivotedQR, qrcp_maxnorm, validate
from ..sketching import SketchFamily, SketchOperator, diagnostics, sample, sketch_dimension
from .flops import flop_model, sketch_flops
from .models import CqrrptConfig, CqrrptDiagnostics, CqrrptOutput
from .rank import rank_stage1, rank_stage2

logger = get_logger(__name__)


def _truncation_ratio(R_sk: np.ndarray, k: int) -> float:
    """||C_k||_F / ||R_sk||_2 of the sketch's R factor."""
    if R_sk.size == 0:
        return 0.0
    top = np.linalg.norm(R_sk, 2)
    if top == 0.0:
        return 0.0
    return float(np.linalg.norm(R_sk[k:, k:], "fro") / top)


def cqrrpt_core(M: DenseMatrix, S: SketchOperator, cfg: Optional[CqrrptConfig] = None) -> CqrrptOutput:
    """
    Factor M[:, J] = Q_k R_k using a given sketching operator.

    Args:
        M: m x n matrix
        S: Sketching operator with S.m == m
        cfg: Rank-selection and diagnostic settings (sketch fields are ignored)

    Returns:
        CqrrptOutput; k = 0 signals numerically zero input
    """
    cfg = cfg or CqrrptConfig()
    M = as_dense(M)
    m, n = M.shape
    if S.m != m:
        raise DimensionError(f"sketch domain {S.m} does not match {m} rows")
    timings: Dict[str, float] = {}
    total = time.perf_counter()

    start = time.perf_counter()
    M_sk = S.apply(M)
    timings["sketch"] = time.perf_counter() - start

    start = time.perf_counter()
    rank_tol = cfg.rank_tol if cfg.rank_tol is not None else n * UNIT_ROUNDOFF
    sketch_qr = qrcp_maxnorm(M_sk, rank_tol=rank_tol, form_q=False)
    timings["qrcp"] = time.perf_counter() - start
    R_sk, J = sketch_qr.R, sketch_qr.J

    start = time.perf_counter()
    k0 = rank_stage1(R_sk) if cfg.stage1_enabled else sketch_qr.k
    timings["rank"] = time.perf_counter() - start

    retries, precond_cond = 0, 1.0
    if k0 > 0:
        stage2 = rank_stage2(
            M[:, J[:k0]],
            R_sk[:k0, :k0],
            eps_tol=cfg.eps_tol,
            method=cfg.cond_method,
            max_retries=cfg.max_cholesky_retries,
        )
        for phase, seconds in stage2.timings.items():
            timings[phase] = timings.get(phase, 0.0) + seconds
        k, Q, R_pre = stage2.k, stage2.Q, stage2.R_pre
        retries, precond_cond = stage2.retries, stage2.cond
    else:
        k, Q, R_pre = 0, np.zeros((m, 0), order="F"), np.zeros((0, 0), order="F")
        timings.update(precondition=0.0, cholqr=0.0)

    start = time.perf_counter()
    R_k = np.asfortranarray(np.triu(R_pre @ R_sk[:k, :])) if k > 0 else np.zeros((0, n), order="F")
    timings["undo"] = time.perf_counter() - start
    timings["total"] = time.perf_counter() - total

    dec = PivotedQR(Q=Q, R=R_k, J=J, k=k)
    distortion = effective_distortion = None
    if cfg.measure_distortion and n > 0:
        subspace = diagnostics(S, M)
        distortion, effective_distortion = subspace.distortion, subspace.effective_distortion
    validation = None
    if cfg.validate_output:
        validation = validate(dec, M, tol=max(cfg.eps_tol, 100.0 * max(n, 1) * UNIT_ROUNDOFF))

    diag = CqrrptDiagnostics(
        precond_cond=precond_cond,
        truncation_ratio=_truncation_ratio(R_sk, k),
        flops=flop_model(m, n, k, S.d, sketch_flops(S, n)),
        cholesky_retries=retries,
        sketch_steps=sketch_qr.k,
        distortion=distortion,
        effective_distortion=effective_distortion,
        timings=timings,
        validation=validation,
    )

    if k == 0:
        logger.info(f"cqrrpt {m}x{n}: numerically zero input (k=0)")
    else:
        logger.info(f"cqrrpt {m}x{n}: d={S.d}, k0={k0}, k={k}, {timings['total']:.3f}s")
    return CqrrptOutput(factorization=dec, k0=k0, k=k, d=S.d, R_sk=R_sk, R_pre=R_pre, diagnostics=diag)


def cqrrpt(
    M: DenseMatrix,
    gamma: Optional[float] = None,
    family: Optional[Union[SketchFamily, str]] = None,
    cfg: Optional[CqrrptConfig] = None,
) -> CqrrptOutput:
    """
    Randomized column-pivoted QR of a tall matrix.

    Samples S with d = ceil(gamma * n) rows from the configured family and
    delegates to cqrrpt_core. SRFT rows are sampled without replacement, so
    for SRFT d is capped at m.

    Args:
        M: m x n matrix
        gamma: Overrides cfg.gamma
        family: Overrides cfg.family
        cfg: Full configuration (defaults to CqrrptConfig())

    Returns:
        CqrrptOutput
    """
    cfg = cfg or CqrrptConfig()
    updates = {}
    if gamma is not None:
        updates["gamma"] = gamma
    if family is not None:
        updates["family"] = SketchFamily(family)
    if updates:
        cfg = CqrrptConfig(**{**cfg.model_dump(), **updates})

    M = as_dense(M)
    m, n = M.shape
    d = sketch_dimension(cfg.gamma, n)
    if d > m:
        logger.warning(f"sketch has more rows than the input ({d} > {m})")
        if cfg.family is SketchFamily.SRFT:
            d = m
    nnz = cfg.nnz
    if cfg.family is SketchFamily.SASO and nnz > d:
        logger.debug(f"clamping SASO nnz {nnz} to d={d}")
        nnz = d
    S = sample(cfg.family, d, m, nnz=nnz, seed=cfg.seed)
    return cqrrpt_core(M, S, cfg)
