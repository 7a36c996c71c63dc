"""Matrix Market exchange for dense matrices."""

from pathlib import Path
from typing import Union

import numpy as np
import scipy.io
import scipy.sparse as sp

from ..logging import get_logger
from .dense import DenseMatrix, as_dense

logger = get_logger(__name__)

PathLike = Union[str, Path]


def read_matrix_market(path: PathLike) -> DenseMatrix:
    """Read an array or coordinate Matrix Market file as a dense matrix."""
    data = scipy.io.mmread(str(path))
    if sp.issparse(data):
        data = data.toarray()
    M = as_dense(data)
    logger.info(f"Read {M.shape[0]}x{M.shape[1]} matrix from {path}")
    return M


def write_matrix_market(path: PathLike, M: DenseMatrix, coordinate: bool = False, comment: str = "") -> None:
    """
    Write M in Matrix Market format.

    Args:
        path: Destination file, written as given
        M: Matrix to write
        coordinate: Use the sparse coordinate layout instead of the array layout
        comment: Header comment
    """
    M = as_dense(M, allow_nonfinite=True)
    payload = sp.coo_matrix(M) if coordinate else np.ascontiguousarray(M)
    with open(path, "wb") as handle:
        scipy.io.mmwrite(handle, payload, comment=comment, field="real", precision=17)
    logger.info(f"Wrote {M.shape[0]}x{M.shape[1]} matrix to {path}")
