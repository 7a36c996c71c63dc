"""Sketching operator families: Gaussian, SASO and SRFT.

An operator is a sampled, immutable d x m map applied from the left. One
seed drives one Philox stream per operator, so the same (family, d, m, nnz,
seed) always yields a bitwise-identical operator.
"""

import math
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, Field

from ..config import DEFAULT_FAMILY, DEFAULT_GAMMA, DEFAULT_NNZ
from ..errors import DimensionError
from ..linalg import DenseMatrix, as_dense
from ..logging import get_logger
from .hadamard import fwht, next_power_of_two

logger = get_logger(__name__)

_BLOB_MAGIC = b"SKOP"
_BLOB_VERSION = 1
_BLOB_FORMAT = "<4sBBqqqQ"


class SketchFamily(str, Enum):
    """Distribution family of a sketching operator."""

    GAUSSIAN = "gaussian"
    SASO = "saso"
    SRFT = "srft"


_FAMILY_CODES = {SketchFamily.GAUSSIAN: 1, SketchFamily.SASO: 2, SketchFamily.SRFT: 3}


class SketchParams(BaseModel):
    """How to size and sample a sketch for an n-column input."""

    family: SketchFamily = Field(default=SketchFamily(DEFAULT_FAMILY), description="Distribution family")
    gamma: float = Field(default=DEFAULT_GAMMA, ge=1.0, description="Sketch size factor, d = ceil(gamma * n)")
    nnz: int = Field(default=DEFAULT_NNZ, ge=1, description="Nonzeros per column (SASO only)")

    model_config = {"frozen": True}


def sketch_dimension(gamma: float, n: int) -> int:
    """d = ceil(gamma * n), at least 1."""
    if gamma < 1.0:
        raise ValueError(f"gamma must be >= 1, got {gamma}")
    return max(1, math.ceil(gamma * n))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SketchOperator:
    """A sampled d x m sketching operator.

    Only the materialization for ``family`` is populated:
    ``dense`` (Gaussian), ``sparse`` CSC with nnz entries per column (SASO),
    or ``signs`` / ``rows`` / ``padded`` (SRFT).
    """

    family: SketchFamily
    d: int
    m: int
    nnz: int
    seed: int
    dense: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    sparse: Optional[sp.csc_matrix] = field(default=None, repr=False, compare=False)
    signs: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    rows: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    padded: int = field(default=0, compare=False)

    @property
    def shape(self):
        return (self.d, self.m)

    def apply(self, M: DenseMatrix) -> DenseMatrix:
        return apply(self, M)

    def to_dense(self) -> DenseMatrix:
        """Materialize S as a d x m array."""
        if self.family is SketchFamily.GAUSSIAN:
            return np.array(self.dense, order="F")
        if self.family is SketchFamily.SASO:
            return np.asfortranarray(self.sparse.toarray())
        return apply(self, np.eye(self.m, order="F"))

    def to_blob(self) -> bytes:
        """Self-describing binary descriptor: magic, version, family, d, m, nnz, seed."""
        return struct.pack(
            _BLOB_FORMAT, _BLOB_MAGIC, _BLOB_VERSION, _FAMILY_CODES[self.family], self.d, self.m, self.nnz, self.seed
        )

    @classmethod
    def from_blob(cls, blob: bytes) -> "SketchOperator":
        """Resample the operator a blob describes."""
        if len(blob) != struct.calcsize(_BLOB_FORMAT):
            raise ValueError(f"sketch blob has wrong length {len(blob)}")
        magic, version, code, d, m, nnz, seed = struct.unpack(_BLOB_FORMAT, blob)
        if magic != _BLOB_MAGIC:
            raise ValueError("not a sketch operator blob")
        if version != _BLOB_VERSION:
            raise ValueError(f"unsupported sketch blob version {version}")
        families = {v: k for k, v in _FAMILY_CODES.items()}
        if code not in families:
            raise ValueError(f"unknown sketch family code {code}")
        return sample(families[code], d, m, nnz=nnz, seed=seed)


def _sample_saso_rows(rng: np.random.Generator, d: int, m: int, nnz: int) -> np.ndarray:
    """m x nnz array of distinct row indices per column."""
    if 2 * nnz > d:
        return np.argsort(rng.random((m, d)), axis=1)[:, :nnz]
    rows = rng.integers(0, d, size=(m, nnz))
    while True:
        ordered = np.sort(rows, axis=1)
        dup = np.any(ordered[:, 1:] == ordered[:, :-1], axis=1)
        if not np.any(dup):
            return rows
        rows[dup] = rng.integers(0, d, size=(int(dup.sum()), nnz))


def sample(
    family: Union[SketchFamily, str],
    d: int,
    m: int,
    nnz: int = DEFAULT_NNZ,
    seed: int = 0,
) -> SketchOperator:
    """
    Sample an operator from a distribution family.

    Args:
        family: gaussian, saso or srft
        d: Sketch rows
        m: Domain rows
        nnz: Nonzeros per column (SASO only; stored as 0 otherwise)
        seed: Non-negative 64-bit seed

    Returns:
        Immutable SketchOperator

    Raises:
        DimensionError: dimensions outside the family's domain
    """
    family = SketchFamily(family)
    if d < 1 or m < 1:
        raise DimensionError(f"sketch dimensions must be positive, got d={d}, m={m}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    rng = _rng(seed)

    if family is SketchFamily.GAUSSIAN:
        S = rng.standard_normal((d, m)) / math.sqrt(d)
        return SketchOperator(family, d, m, 0, seed, dense=_readonly(np.asfortranarray(S)))

    if family is SketchFamily.SASO:
        if not 1 <= nnz <= d:
            raise DimensionError(f"SASO needs 1 <= nnz <= d, got nnz={nnz}, d={d}")
        rows = _sample_saso_rows(rng, d, m, nnz)
        signs = rng.integers(0, 2, size=(m, nnz)) * 2.0 - 1.0
        indptr = np.arange(0, m * nnz + 1, nnz)
        S = sp.csc_matrix((signs.ravel() / math.sqrt(d), rows.ravel(), indptr), shape=(d, m))
        S.sort_indices()
        return SketchOperator(family, d, m, nnz, seed, sparse=S)

    if d > m:
        raise DimensionError(f"SRFT needs d <= m, got d={d}, m={m}")
    padded = next_power_of_two(m)
    signs = rng.integers(0, 2, size=m) * 2.0 - 1.0
    rows = np.sort(rng.choice(padded, size=d, replace=False))
    return SketchOperator(family, d, m, 0, seed, signs=_readonly(signs), rows=_readonly(rows), padded=padded)


def apply(S: SketchOperator, M: DenseMatrix) -> DenseMatrix:
    """Return the d x n sketch S M."""
    M = as_dense(M)
    if M.shape[0] != S.m:
        raise DimensionError(f"sketch expects {S.m} rows, matrix has {M.shape[0]}")

    if S.family is SketchFamily.GAUSSIAN:
        return np.asfortranarray(S.dense @ M)
    if S.family is SketchFamily.SASO:
        return np.asfortranarray(S.sparse @ M)

    X = np.zeros((S.padded, M.shape[1]), dtype=np.float64)
    X[: S.m] = S.signs[:, None] * M
    Y = fwht(X)
    return np.asfortranarray(math.sqrt(S.padded / S.d) * Y[S.rows])
