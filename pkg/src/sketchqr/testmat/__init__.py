"""Deterministic test-matrix families."""

from .generators import (
    GENERATORS,
    gen_by_name,
    gen_exact_rank,
    gen_gaussian,
    gen_high_coherence,
    gen_kahan,
    gen_spectral,
)
from .models import SpectrumKind, SpectrumSpec, TestMatrix

__all__ = [
    "GENERATORS",
    "gen_by_name",
    "gen_exact_rank",
    "gen_gaussian",
    "gen_high_coherence",
    "gen_kahan",
    "gen_spectral",
    "SpectrumKind",
    "SpectrumSpec",
    "TestMatrix",
]
