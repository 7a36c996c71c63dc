"""Spectrum descriptions and generated-matrix carrier."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..linalg import DenseMatrix

STAIRCASE_PLATEAUS = (1.0, 8e-10, 4e-10, 1e-10)


class SpectrumKind(str, Enum):
    POLYNOMIAL_DECAY = "polynomial_decay"
    STAIRCASE = "staircase"
    EXPLICIT_LIST = "explicit_list"


class SpectrumSpec(BaseModel):
    """A prescribed singular-value profile."""

    kind: SpectrumKind = Field(default=SpectrumKind.POLYNOMIAL_DECAY, description="Profile shape")
    cond: float = Field(default=1e10, ge=1.0, description="Target sigma_1 / sigma_n for polynomial decay")
    plateaus: Tuple[float, float, float, float] = Field(
        default=STAIRCASE_PLATEAUS, description="Staircase values on each quarter of the spectrum"
    )
    values: Optional[List[float]] = Field(default=None, description="Explicit singular values")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_values(self) -> "SpectrumSpec":
        if self.kind is SpectrumKind.EXPLICIT_LIST:
            if not self.values:
                raise ValueError("explicit_list spectrum needs values")
            _check_profile(np.asarray(self.values, dtype=float))
        if self.kind is SpectrumKind.STAIRCASE:
            _check_profile(np.asarray(self.plateaus, dtype=float))
        return self

    def singular_values(self, n: int) -> np.ndarray:
        """The n prescribed values, descending."""
        if self.kind is SpectrumKind.EXPLICIT_LIST:
            if len(self.values) != n:
                raise ValueError(f"spectrum has {len(self.values)} values, matrix needs {n}")
            return np.asarray(self.values, dtype=np.float64)

        if self.kind is SpectrumKind.STAIRCASE:
            bounds = [0] + [math.ceil(q * n / 4) for q in (1, 2, 3)] + [n]
            sigma = np.empty(n)
            for value, lo, hi in zip(self.plateaus, bounds[:-1], bounds[1:]):
                sigma[lo:hi] = value
            return sigma

        # First ceil(n/10) values at 1, then t^{-p} for t = 1 .. n - n1,
        # with p chosen so the last value is 1 / cond.
        flat = math.ceil(n / 10)
        sigma = np.ones(n)
        tail = n - flat
        if tail == 1:
            sigma[flat] = 1.0 / self.cond
        elif tail > 1:
            p = math.log(self.cond) / math.log(tail)
            sigma[flat:] = np.arange(1, tail + 1, dtype=np.float64) ** (-p)
        return sigma


def _check_profile(values: np.ndarray) -> None:
    if np.any(values <= 0.0):
        raise ValueError("singular values must be positive")
    if np.any(np.diff(values) > 0.0):
        raise ValueError("singular values must be non-increasing")


@dataclass(frozen=True)
class TestMatrix:
    """A generated matrix and, when the construction fixes them, its singular values."""

    __test__ = False

    name: str
    matrix: DenseMatrix
    sigma: Optional[np.ndarray] = None
