"""Command-line entry point: pivot-quality, profile, verify, gen and factor."""

import argparse
import contextlib
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .. import __version__
from ..config import DEFAULT_EPS_TOL, DEFAULT_FAMILY, DEFAULT_GAMMA, DEFAULT_NNZ, DEFAULT_PROFILE_REPEATS
from ..factor import CondMethod, CqrrptConfig, cqrrpt
from ..linalg import read_matrix_market, write_matrix_market
from ..logging import get_logger, setup_logging
from ..sketching import SketchFamily
from ..testmat import GENERATORS
from .experiments import load_matrix, open_cache, run_pivot_quality, run_profile
from .models import CHECK_NAMES, FactorRequest, GenRequest, PivotQualityRequest, ProfileRequest, VerifyRequest
from .records import RecordWriter, format_value
from .verify import run_verify, write_results

logger = get_logger(__name__)


def _add_matrix_args(parser: argparse.ArgumentParser, multiple_n: bool = False) -> None:
    parser.add_argument("--matrix", required=True, choices=list(GENERATORS), help="Test-matrix family")
    parser.add_argument("--m", type=int, required=True, help="Rows")
    if multiple_n:
        parser.add_argument("--n", type=int, nargs="+", required=True, help="Column counts")
    else:
        parser.add_argument("--n", type=int, required=True, help="Columns")
    parser.add_argument("--cond", type=float, help="Condition number (polynomial-decay)")
    parser.add_argument("--scale", type=float, help="Row scale (high-coherence)")
    parser.add_argument("--theta", type=float, help="Angle (kahan)")
    parser.add_argument("--rank", type=int, help="Rank (exact-rank)")
    parser.add_argument("--cache-dir", type=Path, help="Matrix cache directory")
    parser.add_argument("--no-cache", action="store_true", help="Do not read or write the matrix cache")


def _add_sketch_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="Sketch size factor, d = ceil(gamma n)")
    parser.add_argument("--family", default=DEFAULT_FAMILY, choices=[f.value for f in SketchFamily])
    parser.add_argument("--nnz", type=int, default=DEFAULT_NNZ, help="Nonzeros per SASO column")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--threads", type=int, help="Limit BLAS threads")
    common.add_argument("--seed", type=int, default=0, help="Base seed")

    parser = argparse.ArgumentParser(prog="sketchqr", description="Randomized column-pivoted QR experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pivot-quality", parents=[common], help="Compare CQRRPT pivots with max-norm QRCP")
    _add_matrix_args(p)
    _add_sketch_args(p)
    p.add_argument("--trials", type=int, default=1, help="Seeded trials")
    p.add_argument("--workers", type=int, default=1, help="Worker threads")
    p.add_argument("--output", type=Path, help="CSV destination (default stdout)")
    p.add_argument("--reference", default="maxnorm", choices=["maxnorm", "geqp3"], help="Reference QRCP")

    p = sub.add_parser("profile", parents=[common], help="Per-phase timings and the flop model")
    _add_matrix_args(p, multiple_n=True)
    _add_sketch_args(p)
    p.add_argument("--repeats", type=int, default=DEFAULT_PROFILE_REPEATS, help="Runs per size; best is kept")
    p.add_argument("--output", type=Path, help="Flop-model CSV destination (default stdout)")
    p.add_argument("--timings", type=Path, help="Timing CSV destination (default: after the flop table)")

    p = sub.add_parser("verify", parents=[common], help="Run the verification suite")
    p.add_argument("--only", nargs="+", choices=list(CHECK_NAMES), help="Run only these checks")
    p.add_argument("--trials", type=int, help="Trial count for every check")
    p.add_argument("--workers", type=int, default=1, help="Worker threads")

    p = sub.add_parser("gen", parents=[common], help="Write a test matrix as Matrix Market")
    _add_matrix_args(p)
    p.add_argument("--output", type=Path, required=True, help="Matrix Market destination")
    p.add_argument("--coordinate", action="store_true", help="Coordinate instead of array layout")
    p.add_argument("--sigma-output", type=Path, help="Also write the singular values")

    p = sub.add_parser("factor", parents=[common], help="Factor a Matrix Market file")
    p.add_argument("input", type=Path, help="Matrix Market input")
    p.add_argument("prefix", type=Path, help="Output prefix")
    _add_sketch_args(p)
    p.add_argument("--eps-tol", type=float, default=DEFAULT_EPS_TOL, help="Orthogonality-loss tolerance")
    p.add_argument(
        "--cond-method", default=CondMethod.IDENTITY_DEVIATION.value, choices=[c.value for c in CondMethod]
    )
    return parser


def _matrix_fields(args: argparse.Namespace) -> dict:
    return {
        "matrix": args.matrix,
        "m": args.m,
        "n": args.n,
        "seed": args.seed,
        "cond": args.cond,
        "scale": args.scale,
        "theta": args.theta,
        "rank": args.rank,
        "cache_dir": args.cache_dir,
        "use_cache": not args.no_cache,
    }


def _sketch_fields(args: argparse.Namespace) -> dict:
    return {"gamma": args.gamma, "family": args.family, "nnz": args.nnz}


def cmd_pivot_quality(args: argparse.Namespace) -> int:
    req = PivotQualityRequest(
        **_matrix_fields(args),
        **_sketch_fields(args),
        trials=args.trials,
        workers=args.workers,
        reference=args.reference,
    )
    records = run_pivot_quality(req)
    with RecordWriter(args.output) as writer:
        writer.write_all(records)
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    req = ProfileRequest(**_matrix_fields(args), **_sketch_fields(args), repeats=args.repeats)
    flops, timings = run_profile(req)
    if args.timings is None:
        with RecordWriter(args.output) as writer:
            writer.write_all(flops)
            writer.write_all(timings)
        return 0
    with RecordWriter(args.output) as writer:
        writer.write_all(flops)
    with RecordWriter(args.timings) as writer:
        writer.write_all(timings)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    req = VerifyRequest(only=args.only, trials=args.trials, seed=args.seed, workers=args.workers)
    results = run_verify(req)
    write_results(results)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"verification failed: {', '.join(failed)}")
        return 1
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    req = GenRequest(
        **_matrix_fields(args), output=args.output, coordinate=args.coordinate, sigma_output=args.sigma_output
    )
    tm = load_matrix(req, req.n, req.seed, open_cache(req), with_sigma=req.sigma_output is not None)
    comment = f" {req.matrix} {req.m}x{req.n} seed={req.seed}"
    write_matrix_market(req.output, tm.matrix, coordinate=req.coordinate, comment=comment)
    if req.sigma_output is not None:
        write_matrix_market(req.sigma_output, np.asarray(tm.sigma).reshape(-1, 1), comment=" singular values")
    return 0


def cmd_factor(args: argparse.Namespace) -> int:
    req = FactorRequest(
        input=args.input,
        prefix=args.prefix,
        seed=args.seed,
        eps_tol=args.eps_tol,
        cond_method=args.cond_method,
        **_sketch_fields(args),
    )
    M = read_matrix_market(req.input)
    cfg = CqrrptConfig(
        gamma=req.gamma,
        family=req.family,
        nnz=req.nnz,
        seed=req.seed,
        eps_tol=req.eps_tol,
        cond_method=req.cond_method,
    )
    out = cqrrpt(M, cfg=cfg)

    prefix = str(req.prefix)
    write_matrix_market(f"{prefix}.Q.mtx", out.Q)
    write_matrix_market(f"{prefix}.R.mtx", out.R)
    # Matrix Market and the pivot list are 1-based
    pivots = out.J + 1
    write_matrix_market(f"{prefix}.J.mtx", pivots.astype(np.float64).reshape(-1, 1), comment=" column pivots")
    Path(f"{prefix}.pivots.txt").write_text("".join(f"{j}\n" for j in pivots))
    record = out.to_record()
    Path(f"{prefix}.diag.txt").write_text("".join(f"{key}={format_value(value)}\n" for key, value in record.items()))
    logger.info(f"factor: k={out.k} of n={M.shape[1]}, outputs under {prefix}.*")
    print(f"k={out.k}")
    return 0


COMMANDS = {
    "pivot-quality": cmd_pivot_quality,
    "profile": cmd_profile,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "factor": cmd_factor,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    limits = threadpool_limits(limits=args.threads) if args.threads else contextlib.nullcontext()
    try:
        with limits:
            return COMMANDS[args.command](args)
    except ValueError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
