"""Sketching operators and the subspace-embedding diagnostics built on them."""

from .geometry import (
    Sketch,
    SubspaceDiagnostics,
    coherence,
    diagnostics,
    diagnostics_from_product,
    leverage_scores,
    sketch_product,
)
from .hadamard import fwht, is_power_of_two, next_power_of_two
from .operators import SketchFamily, SketchOperator, SketchParams, apply, sample, sketch_dimension

__all__ = [
    "Sketch",
    "sketch_product",
    "SubspaceDiagnostics",
    "coherence",
    "diagnostics",
    "diagnostics_from_product",
    "leverage_scores",
    "fwht",
    "is_power_of_two",
    "next_power_of_two",
    "SketchFamily",
    "SketchOperator",
    "SketchParams",
    "apply",
    "sample",
    "sketch_dimension",
]
