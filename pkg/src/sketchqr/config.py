"""Numerical constants and defaults.

Everything here is a plain module constant; nothing is read from the
environment. Callers override values through CqrrptConfig or CLI flags.
"""

import math
from pathlib import Path

import numpy as np

# Unit roundoff in the numpy convention (2**-52)
UNIT_ROUNDOFF = float(np.finfo(np.float64).eps)

# Sketching defaults
DEFAULT_GAMMA = 1.25
DEFAULT_FAMILY = "saso"
DEFAULT_NNZ = 4

# Orthogonality-loss tolerance for stage-2 rank selection.
# Accepts cond(R_pre) <= sqrt(eps_tol / u) = 100.
DEFAULT_EPS_TOL = 1e4 * UNIT_ROUNDOFF

# Power iteration / norm estimation
POWER_ITERATION_CAP = 200
POWER_ITERATION_TOL = 1e-10
UPPER_BOUND_INFLATION = 1e-6

# One-sided Jacobi SVD
JACOBI_MAX_SWEEPS = 60

# Drop tolerance (relative to sigma_1) for numerical range bases
RANGE_DROP_TOL = 1e-12

# Max-norm pivoting
NORM_RECOMPUTE_THRESHOLD = math.sqrt(UNIT_ROUNDOFF)
PIVOT_TIE_TOL = 1e3 * UNIT_ROUNDOFF

# Cholesky-failure fallback
MAX_CHOLESKY_RETRIES = 3

# Experiment driver
DEFAULT_PROFILE_REPEATS = 5
RECORD_HEADER = ("experiment", "matrix", "family", "gamma", "nnz", "seed", "metric", "k", "value")

# Cache configuration
CACHE_DIR = Path(".cache")
CACHE_TTL = 604800  # 7 days
