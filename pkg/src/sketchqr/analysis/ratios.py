"""Ratio helpers shared by the analysis checks."""

import math

import numpy as np


def safe_ratio(num, den) -> np.ndarray:
    """num / den elementwise with 0/0 -> 1 and x/0 -> +inf."""
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    out = np.empty(np.broadcast(num, den).shape)
    num, den = np.broadcast_arrays(num, den)
    zero = den == 0.0
    out[~zero] = num[~zero] / den[~zero]
    out[zero & (num == 0.0)] = 1.0
    out[zero & (num != 0.0)] = math.inf
    return out
