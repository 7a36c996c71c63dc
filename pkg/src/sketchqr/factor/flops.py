"""Arithmetic cost model of CQRRPT.

Counts are exact rationals per step; the total is

    2mk^2 + mk(k+1) + 4dnk - 2k^2(d+n) + 5k^3/3 + k^2/2 + k/6 + C_sk
"""

import math
from fractions import Fraction
from typing import Dict, Union

from ..sketching import SketchFamily, SketchOperator

Number = Union[int, float, Fraction]


def flop_breakdown(m: int, n: int, k: int, d: int, c_sk: Number = 0) -> Dict[str, Fraction]:
    """
    Per-step flop counts.

    Args:
        m, n: Shape of M
        k: Final rank
        d: Sketch rows
        c_sk: Cost of forming the sketch

    Returns:
        {"sketch", "qrcp", "precondition", "cholqr"} -> exact count
    """
    if k < 0 or k > min(d, n):
        raise ValueError(f"need 0 <= k <= min(d, n), got k={k}, d={d}, n={n}")
    m, n, k, d = Fraction(m), Fraction(n), Fraction(k), Fraction(d)
    return {
        "sketch": Fraction(c_sk),
        "qrcp": 4 * d * n * k - 2 * k**2 * (d + n) + Fraction(4, 3) * k**3,
        "precondition": m * k**2,
        # Gram product, Cholesky, then Q = M_pre R^{-1}
        "cholqr": m * k * (k + 1) + k**3 / 3 + k**2 / 2 + k / 6 + m * k**2,
    }


def flop_model(m: int, n: int, k: int, d: int, c_sk: Number = 0) -> float:
    """Total modelled flop count."""
    return float(sum(flop_breakdown(m, n, k, d, c_sk).values()))


def sketch_flops(S: SketchOperator, n: int) -> int:
    """Flops to apply S to an m x n matrix."""
    if S.family is SketchFamily.GAUSSIAN:
        return 2 * S.d * S.m * n
    if S.family is SketchFamily.SASO:
        return 2 * S.nnz * S.m * n
    return n * (S.padded * int(math.log2(S.padded)) + S.m)
