"""The verification suite: seeded property checks over the whole library.

Each check runs a number of independent seeded trials and reports whether
every trial (or the required share of trials) satisfied its property,
together with the worst margin observed. Negative margins are violations.
"""

import csv
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..analysis import inheritance_check, maxnorm_similarity_check, pivot_quality, safe_ratio
from ..errors import RankMismatchError
from ..factor import CqrrptConfig, cholesky_qr, cqrrpt, cqrrpt_core, flop_breakdown, flop_model
from ..linalg import cond_2, orthonormal_basis, svd_values, trsm_right
from ..logging import get_logger
from ..qrcp import orthogonality_loss, qrcp_geqp3, qrcp_gram_schmidt, qrcp_maxnorm, validate
from ..sketching import SketchFamily, diagnostics, leverage_scores, sample
from ..testmat import gen_by_name, gen_exact_rank, gen_gaussian
from .experiments import fan_out
from .models import CHECK_NAMES, VerifyRequest

logger = get_logger(__name__)

# Outcome of one trial: whether it passed and its margin
Trial = Tuple[bool, float]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    trials: int
    slack: float
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class CheckContext:
    seed: int = 0
    trials: Optional[int] = None
    workers: int = 1

    def count(self, default: int) -> int:
        return self.trials or default

    def run(self, trial: Callable[[int], Trial], default: int) -> List[Trial]:
        """Run ``trial`` on seeds seed..seed+count-1."""
        return fan_out(trial, [self.seed + t for t in range(self.count(default))], self.workers)


CHECKS: Dict[str, Callable[[CheckContext], CheckResult]] = {}


def check(name: str):
    def register(fn: Callable[[CheckContext], CheckResult]) -> Callable[[CheckContext], CheckResult]:
        CHECKS[name] = fn
        return fn

    return register


def _all_pass(name: str, outcomes: List[Trial], detail: str = "") -> CheckResult:
    failed = sum(1 for ok, _ in outcomes if not ok)
    slack = min((s for _, s in outcomes), default=0.0)
    note = f"{failed} of {len(outcomes)} trials failed" if failed else detail
    return CheckResult(name, failed == 0, len(outcomes), slack, note)


def _share_pass(outcomes: List[bool], share: float, label: str) -> Tuple[bool, float, str]:
    hits = sum(outcomes)
    need = math.ceil(share * len(outcomes))
    return hits >= need, float(hits - need), f"{label}: {hits}/{len(outcomes)} (need {need})"


@check("correctness")
def check_correctness(ctx: CheckContext) -> CheckResult:
    """Full-rank 1000 x 100 Gaussian inputs, Gaussian sketch d = 125: valid output at 1e-13."""
    tol = 1e-13

    def trial(seed: int) -> Trial:
        M = gen_gaussian(1000, 100, seed)
        S = sample(SketchFamily.GAUSSIAN, 125, 1000, seed=seed)
        out = cqrrpt_core(M, S, CqrrptConfig(validate_output=False))
        report = validate(out.factorization, M, tol=tol)
        slack = min(tol - report.orthogonality_loss, tol - report.reconstruction_error) / tol
        return report.passed and out.k == 100, slack

    return _all_pass("correctness", ctx.run(trial, 20))


@check("spectrum-map")
def check_spectrum_map(ctx: CheckContext) -> CheckResult:
    """sigma_i(M_pre) * sigma_{k-i+1}(S U) = 1 for full-rank 500 x 40 inputs."""
    tol = 1e-9

    def trial(seed: int) -> Trial:
        M = gen_gaussian(500, 40, seed)
        S = sample(SketchFamily.GAUSSIAN, 50, 500, seed=seed)
        sketch_qr = qrcp_maxnorm(S.apply(M), form_q=False)
        k = sketch_qr.k
        if k != 40:
            return False, -math.inf
        M_pre = trsm_right(M[:, sketch_qr.J], sketch_qr.R[:, :k])
        sigma_pre = svd_values(M_pre)
        sigma_su = svd_values(S.apply(orthonormal_basis(M)))
        err = float(np.max(np.abs(sigma_pre * sigma_su[::-1] - 1.0)))
        return err <= tol, tol - err

    return _all_pass("spectrum-map", ctx.run(trial, 20))


@check("preconditioner-cond")
def check_preconditioner_cond(ctx: CheckContext) -> CheckResult:
    """
    cond(M_pre) <= (1 + delta) / (1 - delta) in every trial, and <= 1.8 in
    every trial whose measured distortion is at most 1/4.

    Gaussian sketches of 10-column inputs run at gamma = 2 and again at
    gamma = 40; the larger sketches populate the delta <= 1/4 set, which
    must not come out empty.
    """
    n = 10
    small = []

    def run(m: int, d: int) -> Callable[[int], Trial]:
        def trial(seed: int) -> Trial:
            M = gen_gaussian(m, n, seed)
            S = sample(SketchFamily.GAUSSIAN, d, m, seed=seed)
            delta = diagnostics(S, M).distortion
            sketch_qr = qrcp_maxnorm(S.apply(M), form_q=False)
            M_pre = trsm_right(M[:, sketch_qr.J[: sketch_qr.k]], sketch_qr.R[: sketch_qr.k, : sketch_qr.k])
            cond = cond_2(M_pre)
            if delta >= 1.0:
                return True, math.inf
            bound = (1.0 + delta) / (1.0 - delta) * (1.0 + 1e-10)
            slack = bound - cond
            if delta <= 0.25:
                small.append(seed)
                slack = min(slack, 1.8 - cond)
            return slack >= 0.0, slack

        return trial

    outcomes = ctx.run(run(500, 2 * n), 100) + ctx.run(run(2000, 40 * n), 100)
    result = _all_pass("preconditioner-cond", outcomes, f"{len(small)} trials with distortion <= 1/4")
    if not small:
        return CheckResult(result.name, False, result.trials, result.slack, "no trial reached distortion <= 1/4")
    return result


@check("stability-split")
def check_stability_split(ctx: CheckContext) -> CheckResult:
    """Plain CholeskyQR breaks on a cond 1e10 input that CQRRPT factors to 1e-12."""
    tol = 1e-12

    def trial(seed: int) -> Trial:
        M = gen_by_name("polynomial-decay", 4096, 256, seed, cond=1e10).matrix
        plain = cholesky_qr(M)
        plain_broke = not plain.ok or orthogonality_loss(plain.Q) >= 1e-3
        report = validate(cqrrpt(M, cfg=CqrrptConfig(seed=seed, validate_output=False)).factorization, M, tol=tol)
        slack = min(tol - report.orthogonality_loss, tol - report.reconstruction_error) / tol
        return plain_broke and report.passed, slack

    return _all_pass("stability-split", ctx.run(trial, 1))


@check("rank-detection")
def check_rank_detection(ctx: CheckContext) -> CheckResult:
    """Rank-17 512 x 64 products: k = 17 exactly and reconstruction at 1e-12."""
    tol = 1e-12

    def trial(seed: int) -> Trial:
        M = gen_exact_rank(512, 64, 17, seed)
        out = cqrrpt(M, cfg=CqrrptConfig(seed=seed, validate_output=False))
        report = validate(out.factorization, M, tol=tol)
        return out.k == 17 and report.reconstruction_error <= tol, (tol - report.reconstruction_error) / tol

    return _all_pass("rank-detection", ctx.run(trial, 20))


def _pivot_quality_trial(matrix: str, seed: int, gamma: float, nnz: int):
    tm = gen_by_name(matrix, 8192, 256, seed)
    ref = qrcp_geqp3(tm.matrix)
    cfg = CqrrptConfig(gamma=gamma, family=SketchFamily.SASO, nnz=nnz, seed=seed, validate_output=False)
    out = cqrrpt(tm.matrix, cfg=cfg)
    return pivot_quality(tm.matrix, ref, out.factorization, tm.sigma)


@check("pivot-quality-low")
def check_pivot_quality_low(ctx: CheckContext) -> CheckResult:
    """Aggressive SASO sketches (gamma = 1, nnz = 1) keep pivot quality on low-coherence inputs."""
    passed, slack, notes, trials = True, math.inf, [], 0
    for matrix in ("staircase", "polynomial-decay"):

        def trial(seed: int) -> bool:
            curves = _pivot_quality_trial(matrix, seed, 1.0, 1)
            agree = safe_ratio(curves.diag_ratio_test, curves.diag_ratio_ref)
            return curves.trailing_within(0.5, 2.0) and bool(np.all((agree >= 0.25) & (agree <= 4.0)))

        outcomes = fan_out(trial, [ctx.seed + t for t in range(ctx.count(20))], ctx.workers)
        ok, margin, note = _share_pass(outcomes, 0.9, matrix)
        passed, slack, trials = passed and ok, min(slack, margin), trials + len(outcomes)
        notes.append(note)
    return CheckResult("pivot-quality-low", passed, trials, slack, "; ".join(notes))


@check("pivot-quality-high")
def check_pivot_quality_high(ctx: CheckContext) -> CheckResult:
    """High-coherence inputs: gamma = 3, nnz = 4 keeps pivot quality; gamma = 1, nnz = 1 loses it."""
    seeds = [ctx.seed + t for t in range(ctx.count(20))]
    good = fan_out(
        lambda s: _pivot_quality_trial("high-coherence", s, 3.0, 4).trailing_within(0.5, 2.0), seeds, ctx.workers
    )
    bad = fan_out(
        lambda s: not _pivot_quality_trial("high-coherence", s, 1.0, 1).trailing_within(0.5, 2.0), seeds, ctx.workers
    )
    ok_good, slack_good, note_good = _share_pass(good, 0.9, "gamma=3 nnz=4 within")
    ok_bad, slack_bad, note_bad = _share_pass(bad, 0.5, "gamma=1 nnz=1 degraded")
    return CheckResult(
        "pivot-quality-high", ok_good and ok_bad, 2 * len(seeds), min(slack_good, slack_bad), f"{note_good}; {note_bad}"
    )


@check("rrqr-inheritance")
def check_rrqr_inheritance(ctx: CheckContext) -> CheckResult:
    """R-factor bounds transfer from the sketch for random pivots on rank-5 12 x 8 inputs."""

    def trial(seed: int) -> Trial:
        M = gen_exact_rank(12, 8, 5, seed)
        J = np.random.Generator(np.random.Philox(seed)).permutation(8)
        S = sample(SketchFamily.GAUSSIAN, 10, 12, seed=seed)
        try:
            report = inheritance_check(M, S, J)
        except RankMismatchError as e:
            logger.warning(f"rrqr-inheritance seed {seed}: {e}")
            return False, -math.inf
        return report.passed, report.min_slack

    return _all_pass("rrqr-inheritance", ctx.run(trial, 200))


@check("maxnorm-similarity")
def check_maxnorm_similarity(ctx: CheckContext) -> CheckResult:
    """
    Sketched max-norm pivots stay within the distortion bound of the exact
    pivot after l = 0..10 shared pivots (50 x 20 inputs, Gaussian d = 22).

    The restricted-singular-value bound is enforced where it is rigorous
    (no shared pivots); the (1 - delta_l) / (1 + delta_l) bound for every l.
    """

    def trial(seed: int) -> Trial:
        M = gen_gaussian(50, 20, seed)
        S = sample(SketchFamily.GAUSSIAN, 22, 50, seed=seed)
        ok, slack = True, math.inf
        for ell in range(11):
            report = maxnorm_similarity_check(M, S, ell)
            margin = report.slack_sharp
            if ell == 0:
                margin = min(margin, report.slack_sigma)
            margin /= report.phi_pivot
            ok = ok and margin >= -report.tol
            slack = min(slack, margin)
        return ok, slack

    return _all_pass("maxnorm-similarity", ctx.run(trial, 100))


@check("pivot-equivalence")
def check_pivot_equivalence(ctx: CheckContext) -> CheckResult:
    """Householder and Gram-Schmidt QRCP agree on J for 100 x 30 inputs with separated column norms."""

    def trial(seed: int) -> Trial:
        rng = np.random.Generator(np.random.Philox(seed))
        M = rng.standard_normal((100, 30)) * 2.0 ** -rng.permutation(30).astype(float)
        same = np.array_equal(qrcp_maxnorm(M, form_q=False).J, qrcp_gram_schmidt(M).J)
        return same, 0.0 if same else -1.0

    return _all_pass("pivot-equivalence", ctx.run(trial, 100))


def _closed_form_flops(m: int, n: int, k: int, d: int, c_sk: int) -> Fraction:
    m, n, k, d = Fraction(m), Fraction(n), Fraction(k), Fraction(d)
    return (
        2 * m * k**2
        + m * k * (k + 1)
        + 4 * d * n * k
        - 2 * k**2 * (d + n)
        + Fraction(5, 3) * k**3
        + k**2 / 2
        + k / 6
        + c_sk
    )


@check("flop-model")
def check_flop_model(ctx: CheckContext) -> CheckResult:
    """Per-step counts sum exactly to the closed form; the total tends to 3 m n^2."""

    def trial(seed: int) -> Trial:
        rng = np.random.Generator(np.random.Philox(seed))
        n = int(rng.integers(1, 500))
        d = int(rng.integers(n, 3 * n + 1))
        m = int(rng.integers(d, 10**6))
        k = int(rng.integers(0, n + 1))
        c_sk = int(rng.integers(0, 10**9))
        exact = sum(flop_breakdown(m, n, k, d, c_sk).values()) == _closed_form_flops(m, n, k, d, c_sk)
        return exact, 0.0 if exact else -1.0

    outcomes = ctx.run(trial, 10)
    m, n = 10**6, 100
    leading = flop_model(m, n, n, 125) / (3.0 * m * n**2)
    outcomes.append((abs(leading - 1.0) <= 0.01, 0.01 - abs(leading - 1.0)))
    return _all_pass("flop-model", outcomes, f"total / 3mn^2 = {leading:.6f} at m = 10^6")


@check("sketch-structure")
def check_sketch_structure(ctx: CheckContext) -> CheckResult:
    """SASO sparsity pattern, SRFT row orthogonality, leverage-score mass and sampling determinism."""

    def trial(seed: int) -> Trial:
        ok, slack = True, math.inf

        saso = sample(SketchFamily.SASO, 64, 1000, nnz=4, seed=seed).sparse
        per_column = np.diff(saso.indptr)
        distinct = all(np.unique(saso.indices[a:b]).size == b - a for a, b in zip(saso.indptr[:-1], saso.indptr[1:]))
        values = bool(np.all(np.abs(saso.data) == 1.0 / math.sqrt(64)))
        ok = ok and bool(np.all(per_column == 4)) and values and distinct

        S = sample(SketchFamily.SRFT, 64, 1024, seed=seed).to_dense()
        err = float(np.max(np.abs(S @ S.T - (1024 / 64) * np.eye(64))))
        ok, slack = ok and err <= 1e-12, min(slack, 1e-12 - err)

        M = gen_gaussian(500, 40, seed)
        err = abs(float(leverage_scores(M).sum()) - 40.0)
        ok, slack = ok and err <= 1e-10, min(slack, 1e-10 - err)

        X = gen_gaussian(1024, 8, seed + 1)
        for family in SketchFamily:
            first = sample(family, 64, 1024, nnz=4, seed=seed)
            second = sample(family, 64, 1024, nnz=4, seed=seed)
            ok = ok and np.array_equal(first.to_dense(), second.to_dense())
            ok = ok and np.array_equal(first.apply(X), second.apply(X))
        return ok, slack

    return _all_pass("sketch-structure", ctx.run(trial, 1))


def run_verify(req: VerifyRequest) -> List[CheckResult]:
    """Run the requested checks in suite order."""
    ctx = CheckContext(seed=req.seed, trials=req.trials, workers=req.workers)
    names = [name for name in CHECK_NAMES if req.only is None or name in req.only]
    results = []
    for name in names:
        start = time.perf_counter()
        result = CHECKS[name](ctx)
        seconds = time.perf_counter() - start
        result = CheckResult(result.name, result.passed, result.trials, result.slack, result.detail, seconds)
        level = logger.info if result.passed else logger.warning
        level(f"{name}: {'PASS' if result.passed else 'FAIL'} in {seconds:.2f}s ({result.detail})")
        results.append(result)
    return results


def write_results(results: List[CheckResult], stream: Optional[IO[str]] = None) -> None:
    """One CSV row per check; timing goes to the log, not the table."""
    writer = csv.writer(stream or sys.stdout, lineterminator="\n")
    writer.writerow(("check", "status", "trials", "slack", "detail"))
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        writer.writerow((result.name, status, result.trials, format(result.slack, ".3e"), result.detail))
