"""Fast Walsh-Hadamard transform."""

import numpy as np


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def next_power_of_two(n: int) -> int:
    return 1 if n <= 1 else 1 << (int(n) - 1).bit_length()


def fwht(X: np.ndarray) -> np.ndarray:
    """
    Orthonormal Walsh-Hadamard transform along axis 0 (natural order).

    Computes H X / sqrt(N) for N = X.shape[0], a power of two, in
    O(N log N) per column. Returns a new array; X is not modified.
    """
    X = np.asarray(X, dtype=np.float64)
    squeeze = X.ndim == 1
    Y = np.array(X.reshape(X.shape[0], -1), dtype=np.float64, order="C", copy=True)
    N, cols = Y.shape
    if not is_power_of_two(N):
        raise ValueError(f"fwht length must be a power of two, got {N}")

    h = 1
    while h < N:
        blocks = Y.reshape(N // (2 * h), 2, h, cols)
        top = blocks[:, 0].copy()
        bottom = blocks[:, 1]
        blocks[:, 0] = top + bottom
        blocks[:, 1] = top - bottom
        h *= 2
    Y /= np.sqrt(N)
    return Y[:, 0] if squeeze else Y
