"""Tests for the CQRRPT flop model."""

from fractions import Fraction

import pytest

from sketchqr.factor import flop_breakdown, flop_model, sketch_flops
from sketchqr.sketching import SketchFamily, sample


def test_flop_model_reference_value():
    """Test the total for a square-rank 1000 x 100 problem with d = 125."""
    assert flop_model(1000, 100, 100, 125) == pytest.approx(32271683.333333332, rel=1e-15)


def test_zero_rank_costs_only_the_sketch():
    """Test that k = 0 leaves the sketching cost."""
    assert flop_model(500, 40, 0, 50, c_sk=1234) == 1234.0
    parts = flop_breakdown(500, 40, 0, 50)
    assert all(value == 0 for value in parts.values())


def test_breakdown_sums_to_closed_form():
    """Test the per-step counts against the closed-form total."""
    m, n, k, d = 777, 60, 45, 80
    total = sum(flop_breakdown(m, n, k, d).values())
    closed = (
        2 * m * k**2
        + m * k * (k + 1)
        + 4 * d * n * k
        - 2 * k**2 * (d + n)
        + Fraction(5, 3) * k**3
        + Fraction(k**2, 2)
        + Fraction(k, 6)
    )
    assert total == closed


def test_leading_term_dominates():
    """Test that the total approaches 3 m k^2 (plus m k) for m much larger than n."""
    n = k = 100
    ratio = flop_model(10**6, n, k, 125) / (3 * 10**6 * k**2)
    assert ratio == pytest.approx(1.0, rel=1e-2)
    ratio = flop_model(10**9, n, k, 125) / (3 * 10**9 * k**2 + 10**9 * k)
    assert ratio == pytest.approx(1.0, rel=1e-5)


def test_breakdown_rejects_bad_rank():
    """Test that k outside [0, min(d, n)] raises."""
    with pytest.raises(ValueError):
        flop_breakdown(100, 10, 11, 20)
    with pytest.raises(ValueError):
        flop_breakdown(100, 10, -1, 20)


def test_sketch_flops_per_family():
    """Test the sketching cost of each family."""
    assert sketch_flops(sample(SketchFamily.GAUSSIAN, 10, 100, seed=0), 5) == 2 * 10 * 100 * 5
    assert sketch_flops(sample(SketchFamily.SASO, 10, 100, nnz=3, seed=0), 5) == 2 * 3 * 100 * 5
    assert sketch_flops(sample(SketchFamily.SRFT, 10, 100, seed=0), 5) == 5 * (128 * 7 + 100)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
