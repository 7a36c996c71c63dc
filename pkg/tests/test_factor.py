"""Tests for CholeskyQR, rank selection and CQRRPT."""

import dataclasses
import logging
import math

import numpy as np
import pytest

from sketchqr.config import UNIT_ROUNDOFF
from sketchqr.errors import DimensionError
from sketchqr.factor import (
    CondMethod,
    CqrrptConfig,
    cholesky_qr,
    cholesky_qr2,
    cond_estimate,
    cqrrpt,
    cqrrpt_core,
    rank_stage1,
    rank_stage2,
    select_rank,
    trailing_norms,
)
from sketchqr.qrcp import orthogonality_loss, validate
from sketchqr.sketching import SketchFamily, sample
from sketchqr.testmat import gen_by_name, gen_exact_rank, gen_gaussian


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def _relative_residual(M, out):
    return np.linalg.norm(M[:, out.J] - out.Q @ out.R) / np.linalg.norm(M)


def test_cholesky_qr_small_example():
    """Test CholeskyQR of a single column."""
    result = cholesky_qr(np.array([[3.0], [4.0]]))
    assert result.ok
    np.testing.assert_allclose(result.R, [[5.0]])
    np.testing.assert_allclose(result.Q, [[0.6], [0.8]])


def test_cholesky_qr_failure_keeps_leading_block():
    """Test that a zero column reports its 1-based minor."""
    M = np.zeros((5, 2))
    M[:, 0] = 2.0
    result = cholesky_qr(M)
    assert result.info == 2
    assert result.Q is None
    assert result.R.shape == (1, 1)


def test_cholesky_qr2_restores_orthogonality():
    """Test that a second pass reaches unit-roundoff orthogonality."""
    M = _rng(0).standard_normal((300, 12)) * np.logspace(0, -4, 12)
    once = cholesky_qr(M)
    twice = cholesky_qr2(M)
    assert twice.ok
    assert orthogonality_loss(twice.Q) <= 1e-14
    assert orthogonality_loss(twice.Q) <= orthogonality_loss(once.Q)
    assert np.linalg.norm(M - twice.Q @ twice.R) <= 1e-14 * np.linalg.norm(M)


def test_trailing_norms():
    """Test bottom-up trailing Frobenius masses."""
    R = np.diag([3.0, 0.0, 4.0])
    np.testing.assert_allclose(trailing_norms(R), [5.0, 4.0, 4.0, 0.0])
    np.testing.assert_array_equal(trailing_norms(np.zeros((2, 2))), np.zeros(3))


@pytest.mark.parametrize(
    "diag, expected",
    [
        ([1.0, 1e-20], 1),
        ([0.0, 0.0], 0),
        ([1.0, 1e-8, 1e-18, 1e-19], 2),
        ([1.0, 0.5, 0.25], 3),
    ],
)
def test_rank_stage1(diag, expected):
    """Test stage-1 truncation on diagonal factors."""
    assert rank_stage1(np.diag(diag)) == expected


@pytest.mark.parametrize("method", list(CondMethod))
def test_cond_estimate_identity(method):
    """Test that every bound gives 1 on the identity."""
    assert cond_estimate(np.eye(6), method).value == pytest.approx(1.0, rel=1e-5)


def test_cond_estimate_diag_ratio_and_singular():
    """Test the diagonal ratio and singular inputs."""
    bound = cond_estimate(np.diag([10.0, 1.0]), CondMethod.DIAG_RATIO)
    assert bound.value == pytest.approx(10.0)
    assert bound.direction == "lower"
    for method in CondMethod:
        assert math.isinf(cond_estimate(np.diag([1.0, 0.0]), method).value)


def test_cond_estimate_brackets_true_condition():
    """Test lower and upper bounds around the SVD condition number."""
    rng = _rng(1)
    X = np.eye(8) + 0.05 * np.triu(rng.standard_normal((8, 8)), 1)
    X *= 3.0
    true = np.linalg.cond(X)
    assert cond_estimate(X, CondMethod.DIAG_RATIO).value <= true * (1 + 1e-12)
    assert cond_estimate(X, CondMethod.KRYLOV_BOUNDS).value >= true * (1 - 1e-12)
    assert cond_estimate(X, CondMethod.IDENTITY_DEVIATION).value >= true * (1 - 1e-12)


def test_select_rank():
    """Test the largest leading block below the threshold."""
    R = np.diag([1.0, 1.0, 1e-3, 1e-6])
    assert select_rank(R, 100.0, CondMethod.DIAG_RATIO) == (2, 1.0)
    k, cond = select_rank(R, 1e7, CondMethod.DIAG_RATIO)
    assert k == 4
    assert cond == pytest.approx(1e6)
    assert select_rank(np.zeros((0, 0)), 100.0, CondMethod.DIAG_RATIO) == (0, 1.0)


def test_rank_stage2_with_exact_preconditioner():
    """Test that preconditioning by M's own R leaves an orthonormal block."""
    M = _rng(2).standard_normal((200, 10))
    _, A = np.linalg.qr(M)
    result = rank_stage2(M, A, eps_tol=1e4 * UNIT_ROUNDOFF)
    assert result.k == 10
    assert result.retries == 0
    assert result.cond <= 1.0 + 1e-6
    assert orthogonality_loss(result.Q) <= 1e-14
    assert set(result.timings) == {"precondition", "cholqr", "rank"}


def test_rank_stage2_cholesky_fallback():
    """Test that an exactly singular minor shrinks k0 and retries."""
    rng = _rng(9)
    M = np.zeros((200, 10))
    M[:, :4] = rng.standard_normal((200, 4))
    M[:, 5:] = M[:, :4] @ rng.standard_normal((4, 5))
    A = np.diag(np.arange(1.0, 11.0))
    result = rank_stage2(M, A, eps_tol=1e4 * UNIT_ROUNDOFF)
    assert result.retries == 1
    assert result.k0 == 4
    assert result.k == 4
    assert result.Q.shape == (200, 4)
    assert orthogonality_loss(result.Q) <= 1e-13


def test_rank_stage2_rank_deficient_block():
    """Test that a generic preconditioner on a rank-4 block never keeps more than 4 columns."""
    rng = _rng(10)
    M = rng.standard_normal((200, 4)) @ rng.standard_normal((4, 10))
    A = np.triu(rng.standard_normal((10, 10))) + 5.0 * np.eye(10)
    result = rank_stage2(M, A, eps_tol=1e4 * UNIT_ROUNDOFF)
    assert 1 <= result.k <= 4
    assert result.k0 <= 10
    assert orthogonality_loss(result.Q) <= 1e-10


def test_config_validation():
    """Test that eps_tol must exceed unit roundoff."""
    with pytest.raises(ValueError):
        CqrrptConfig(eps_tol=UNIT_ROUNDOFF / 2)
    with pytest.raises(ValueError):
        CqrrptConfig(gamma=0.9)


def test_cqrrpt_default_sketch_size():
    """Test d = ceil(1.25 n) and a valid full-rank factorization."""
    M = gen_gaussian(500, 50, seed=3)
    out = cqrrpt(M)
    assert out.d == 63
    assert out.k == 50
    assert out.diagnostics.validation.passed
    assert sorted(out.J.tolist()) == list(range(50))


def test_cqrrpt_zero_matrix():
    """Test that numerically zero input returns k = 0."""
    out = cqrrpt(np.zeros((100, 10)))
    assert out.k == 0
    assert out.Q.shape == (100, 0)
    assert out.R.shape == (0, 10)
    assert sorted(out.J.tolist()) == list(range(10))


@pytest.mark.parametrize("family", list(SketchFamily))
def test_cqrrpt_exact_rank(family):
    """Test that an exact rank-10 input is truncated at 10."""
    M = gen_exact_rank(256, 40, 10, seed=4)
    out = cqrrpt(M, family=family, cfg=CqrrptConfig(seed=4))
    assert out.k == 10
    assert _relative_residual(M, out) <= 1e-12
    assert orthogonality_loss(out.Q) <= 1e-12


def test_cqrrpt_scaled_unit_columns():
    """Test pivots of orthogonal columns with distinct norms under an orthogonal sketch."""
    M = np.zeros((4, 3))
    M[0, 0], M[1, 1], M[2, 2] = 1.0, 2.0, 3.0
    out = cqrrpt_core(M, sample(SketchFamily.SRFT, 4, 4, seed=5))
    np.testing.assert_array_equal(out.J, [2, 1, 0])
    np.testing.assert_allclose(np.abs(np.diag(out.R)), [3.0, 2.0, 1.0], rtol=1e-13)


def test_cqrrpt_square_srft():
    """Test that SRFT sketches of square input are capped at d = m."""
    M = gen_gaussian(8, 8, seed=1)
    out = cqrrpt(M, family="srft")
    assert out.d == 8
    assert out.k == 8
    assert _relative_residual(M, out) <= 1e-13


def test_cqrrpt_stability_split():
    """Test that CQRRPT stays orthogonal where plain CholeskyQR breaks down."""
    M = gen_by_name("polynomial-decay", 1024, 64, 5, cond=1e10).matrix
    plain = cholesky_qr(M)
    assert not plain.ok or orthogonality_loss(plain.Q) >= 1e-3

    report = validate(cqrrpt(M, cfg=CqrrptConfig(seed=5, validate_output=False)).factorization, M, tol=1e-12)
    assert report.passed, report.failures


def test_aggressive_sketch_reports_truncation_quietly(caplog):
    """Test that the truncation ratio on a gamma = 1 staircase run logs no iteration-cap warning."""
    M = gen_by_name("staircase", 2048, 64, 3).matrix
    with caplog.at_level(logging.WARNING, logger="sketchqr"):
        out = cqrrpt(M, cfg=CqrrptConfig(gamma=1.0, nnz=1, seed=3))
    assert not any("iteration cap" in record.getMessage() for record in caplog.records)
    assert out.diagnostics.truncation_ratio >= 0.0


def test_diagnostics_are_frozen():
    """Test that collected diagnostics cannot be modified."""
    out = cqrrpt(gen_gaussian(50, 5, seed=2))
    with pytest.raises(dataclasses.FrozenInstanceError):
        out.diagnostics.flops = 0.0


def test_cqrrpt_gaussian_correctness():
    """Test orthogonality and reconstruction with a Gaussian sketch."""
    M = gen_gaussian(1000, 100, seed=6)
    out = cqrrpt(M, gamma=1.25, family="gaussian", cfg=CqrrptConfig(seed=6))
    assert out.d == 125
    assert out.k == 100
    assert orthogonality_loss(out.Q) <= 1e-13
    assert _relative_residual(M, out) <= 1e-13
    assert out.diagnostics.flops > 0


def test_cqrrpt_is_deterministic():
    """Test that equal seeds give bitwise-equal outputs."""
    M = gen_gaussian(300, 30, seed=7)
    cfg = CqrrptConfig(seed=2**40 + 1)
    first, second = cqrrpt(M, cfg=cfg), cqrrpt(M, cfg=cfg)
    assert np.array_equal(first.J, second.J)
    assert np.array_equal(first.Q, second.Q)
    assert np.array_equal(first.R, second.R)


def test_cqrrpt_core_rejects_mismatched_sketch():
    """Test that a sketch over the wrong row count raises."""
    with pytest.raises(DimensionError):
        cqrrpt_core(np.ones((10, 2)), sample(SketchFamily.GAUSSIAN, 4, 12, seed=0))


def test_to_record():
    """Test the flat diagnostics record."""
    M = gen_gaussian(200, 20, seed=8)
    record = cqrrpt(M, cfg=CqrrptConfig(measure_distortion=True)).to_record()
    assert record["m"] == 200 and record["n"] == 20
    assert record["k"] == 20 and record["d"] == 25
    assert record["valid"]
    assert 0.0 <= record["effective_distortion"] <= record["distortion"] + 1e-15
    assert "time_total" in record


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
