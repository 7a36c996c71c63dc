"""Tabular experiment output."""

import csv
import sys
import threading
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import IO, Iterable, Optional

from ..config import RECORD_HEADER
from ..logging import get_logger

logger = get_logger(__name__)


def format_value(value) -> str:
    """Round-trippable text for a record field."""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


@dataclass(frozen=True)
class ExperimentRecord:
    """One row of an experiment table."""

    experiment: str
    matrix: str
    family: str
    gamma: float
    nnz: int
    seed: int
    metric: str
    k: int
    value: float

    def row(self) -> list:
        return [format_value(field) for field in astuple(self)]


class RecordWriter:
    """Append-only CSV writer with a single header row; safe to share between threads."""

    def __init__(self, path: Optional[Path] = None, stream: Optional[IO[str]] = None):
        self.path = path
        self._owned = path is not None
        self._handle = open(path, "w", newline="") if path is not None else (stream or sys.stdout)
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._lock = threading.Lock()
        self._writer.writerow(RECORD_HEADER)
        self.count = 0

    def write(self, record: ExperimentRecord) -> None:
        with self._lock:
            self._writer.writerow(record.row())
            self.count += 1

    def write_all(self, records: Iterable[ExperimentRecord]) -> None:
        with self._lock:
            for record in records:
                self._writer.writerow(record.row())
                self.count += 1

    def close(self) -> None:
        self._handle.flush()
        if self._owned:
            self._handle.close()
            logger.info(f"Wrote {self.count} records to {self.path}")

    def __enter__(self) -> "RecordWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
