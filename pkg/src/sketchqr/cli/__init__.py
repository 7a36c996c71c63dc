"""Experiment driver and verification suite."""

from .experiments import run_pivot_quality, run_profile
from .main import main
from .records import ExperimentRecord, RecordWriter
from .verify import CHECKS, CheckResult, run_verify

__all__ = [
    "run_pivot_quality",
    "run_profile",
    "main",
    "ExperimentRecord",
    "RecordWriter",
    "CHECKS",
    "CheckResult",
    "run_verify",
]
