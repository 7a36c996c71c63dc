"""Experiment drivers behind the pivot-quality and profile subcommands."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

import numpy as np

from ..analysis import pivot_quality
from ..cache import MatrixCache
from ..factor import CqrrptConfig, CqrrptOutput, cqrrpt, cqrrpt_core, flop_breakdown, sketch_flops
from ..linalg import svd_values
from ..logging import get_logger
from ..qrcp import qrcp_geqp3, qrcp_maxnorm
from ..sketching import SketchFamily, SketchOperator, sample, sketch_dimension
from ..testmat import TestMatrix, gen_by_name
from .models import MatrixRequest, PivotQualityRequest, ProfileRequest, SketchRequest
from .records import ExperimentRecord

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")

PROFILE_PHASES = ("sketch", "qrcp", "rank", "precondition", "cholqr", "undo")


def fan_out(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Map fn over items, in order, on up to ``workers`` threads."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def open_cache(req: MatrixRequest) -> Optional[MatrixCache]:
    return MatrixCache(req.cache_dir) if req.use_cache else None


def load_matrix(
    req: MatrixRequest, n: int, seed: int, cache: Optional[MatrixCache] = None, with_sigma: bool = True
) -> TestMatrix:
    """Generate (or fetch from the cache) the requested matrix, computing its singular values if asked."""
    params = req.generator_params()
    if cache is None:
        tm = gen_by_name(req.matrix, req.m, n, seed, **params)
    else:
        tm = cache.generate(req.matrix, req.m, n, seed, **params)
    if tm.sigma is not None or not with_sigma:
        return tm

    descriptor = MatrixCache.describe(req.matrix, req.m, n, seed, params)
    sigma = cache.get_sigma(descriptor) if cache is not None else None
    if sigma is None:
        sigma = svd_values(tm.matrix)
        if cache is not None:
            cache.set_sigma(descriptor, sigma)
    return TestMatrix(tm.name, tm.matrix, sigma)


def matrix_label(req: MatrixRequest, n: int) -> str:
    return f"{req.matrix}-{req.m}x{n}"


def sketch_for(req: SketchRequest, m: int, n: int, seed: int) -> SketchOperator:
    """Sample the operator cqrrpt would draw for these settings."""
    d = sketch_dimension(req.gamma, n)
    nnz = min(req.nnz, d) if req.family is SketchFamily.SASO else req.nnz
    return sample(req.family, d, m, nnz=nnz, seed=seed)


def _pivot_quality_trial(req: PivotQualityRequest, cache: Optional[MatrixCache], trial: int) -> List[ExperimentRecord]:
    seed = req.seed + trial
    tm = load_matrix(req, req.n, seed, cache)
    M = tm.matrix

    ref = qrcp_geqp3(M) if req.reference == "geqp3" else qrcp_maxnorm(M)
    cfg = CqrrptConfig(gamma=req.gamma, family=req.family, nnz=req.nnz, seed=seed, validate_output=False)
    out = cqrrpt(M, cfg=cfg)
    curves = pivot_quality(M, ref, out.factorization, tm.sigma)

    label = matrix_label(req, req.n)
    records = []
    for metric in ("trailing_ratio", "diag_ratio_ref", "diag_ratio_test"):
        for k, value in zip(curves.ks, getattr(curves, metric)):
            records.append(
                ExperimentRecord(
                    "pivot-quality", label, req.family.value, req.gamma, req.nnz, seed, metric, k, float(value)
                )
            )
    logger.info(f"pivot-quality trial {trial} (seed={seed}): reference k={ref.k}, cqrrpt k={out.k}")
    return records


def run_pivot_quality(req: PivotQualityRequest) -> List[ExperimentRecord]:
    """
    Compare max-norm QRCP (reference) against CQRRPT (test) on a generated matrix.

    Emits trailing_ratio, diag_ratio_ref and diag_ratio_test for every k = 1..n
    and every trial.

    Args:
        req: Validated request

    Returns:
        Records in trial, metric, k order
    """
    cache = open_cache(req)
    per_trial = fan_out(lambda t: _pivot_quality_trial(req, cache, t), range(req.trials), req.workers)
    return [record for records in per_trial for record in records]


def _best_of(M: np.ndarray, S: SketchOperator, cfg: CqrrptConfig, repeats: int) -> CqrrptOutput:
    best = None
    for _ in range(repeats):
        out = cqrrpt_core(M, S, cfg)
        if best is None or out.diagnostics.timings["total"] < best.diagnostics.timings["total"]:
            best = out
    return best


def run_profile(req: ProfileRequest) -> Tuple[List[ExperimentRecord], List[ExperimentRecord]]:
    """
    Time CQRRPT's phases and evaluate the flop model.

    For every n the sketch is sampled once and the factorization repeated;
    the run with the smallest total time is reported. Validation and
    distortion measurement are switched off so only the algorithm is timed.

    Returns:
        (flop-model records, timing records)
    """
    cache = open_cache(req)
    cfg = CqrrptConfig(
        gamma=req.gamma,
        family=req.family,
        nnz=req.nnz,
        seed=req.seed,
        validate_output=False,
        measure_distortion=False,
    )
    flops, timings = [], []
    for n in req.n:
        M = load_matrix(req, n, req.seed, cache, with_sigma=False).matrix
        S = sketch_for(req, req.m, n, req.seed)
        best = _best_of(M, S, cfg, req.repeats)
        label = matrix_label(req, n)

        def record(metric: str, value: float) -> ExperimentRecord:
            return ExperimentRecord(
                "profile", label, req.family.value, req.gamma, req.nnz, req.seed, metric, best.k, value
            )

        breakdown = flop_breakdown(req.m, n, best.k, S.d, sketch_flops(S, n))
        for phase, count in breakdown.items():
            flops.append(record(f"flops_{phase}", float(count)))
        flops.append(record("flops_total", float(sum(breakdown.values()))))

        phase_times = best.diagnostics.timings
        total = phase_times["total"]
        for phase in PROFILE_PHASES:
            seconds = phase_times.get(phase, 0.0)
            timings.append(record(f"time_{phase}", seconds))
            timings.append(record(f"fraction_{phase}", seconds / total if total > 0.0 else 0.0))
        timings.append(record("time_total", total))
        logger.info(
            f"profile {label}: k={best.k}, total {total:.4f}s, "
            f"qrcp {phase_times['qrcp'] / total if total > 0 else 0.0:.1%}"
        )
    return flops, timings
